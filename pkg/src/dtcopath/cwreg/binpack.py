"""Best-fit bin packing."""

from __future__ import annotations

import bisect
import itertools


class OversizeItem(ValueError):
    pass


def best_fit_pack(items, capacity):
    """Classic best-fit in the given order.

    ``items`` are ``(id, width)`` pairs. Each item goes into the fullest bin
    that still has room, else into a new bin. Returns lists of item ids.
    """
    bins: list[list] = []
    # (remaining capacity, bin index), kept sorted; smallest remainder = fullest
    free: list[tuple[int, int]] = []
    for iid, w in items:
        if w > capacity:
            raise OversizeItem(f"item {iid} of width {w} exceeds capacity {capacity}")
        j = bisect.bisect_left(free, (w, -1))
        if j < len(free):
            rem, b = free.pop(j)
            bins[b].append(iid)
            bisect.insort(free, (rem - w, b))
        else:
            bins.append([iid])
            bisect.insort(free, (capacity - w, len(bins) - 1))
    return bins


def best_fit_decreasing(items, capacity):
    """Best-fit over items sorted by decreasing width (stable)."""
    order = sorted(items, key=lambda it: -it[1])
    return best_fit_pack(order, capacity)


def min_bins_bruteforce(widths, capacity) -> int:
    """Exact minimum bin count by exhaustive search (small inputs only)."""
    widths = sorted(widths, reverse=True)
    if any(w > capacity for w in widths):
        raise OversizeItem("item exceeds capacity")
    if not widths:
        return 0
    lower = -(-sum(widths) // capacity)
    for k in itertools.count(lower):
        if _fits(widths, [capacity] * k):
            return k


def _fits(widths, rems, i=0):
    if i == len(widths):
        return True
    seen = set()
    w = widths[i]
    for b, r in enumerate(rems):
        if r >= w and r not in seen:
            seen.add(r)
            rems[b] -= w
            if _fits(widths, rems, i + 1):
                rems[b] += w
                return True
            rems[b] += w
    return False
