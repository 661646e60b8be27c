"""Random neighbor-swap tangling with a prefix-consistent swap stream."""

from __future__ import annotations

import numpy as np

from .place import Placement

_BLOCK = 4096


def neighbor_table(p: Placement) -> np.ndarray:
    """(S, 4) slot neighbors (left, right, below, above) among occupied slots, -1 if none.

    Left/right are the nearest occupied slots in the same row; below/above
    are the occupied slots nearest in x on the adjacent rows.
    """
    occ = np.zeros(len(p.slots), dtype=bool)
    occ[p.slot_of] = True
    nb = np.full((len(p.slots), 4), -1, dtype=int)
    by_row: dict[int, np.ndarray] = {}
    for r in np.unique(p.slots[occ, 0]):
        ids = np.flatnonzero(occ & (p.slots[:, 0] == r))
        by_row[int(r)] = ids[np.argsort(p.slots[ids, 1], kind="stable")]
    for r, ids in by_row.items():
        nb[ids[1:], 0] = ids[:-1]
        nb[ids[:-1], 1] = ids[1:]
        xs = p.slots[ids, 1]
        for col, rr in ((2, r - 1), (3, r + 1)):
            other = by_row.get(rr)
            if other is None:
                continue
            ox = p.slots[other, 1]
            j = np.clip(np.searchsorted(ox, xs), 1, len(ox) - 1) if len(ox) > 1 else np.zeros(len(xs), int)
            if len(ox) > 1:
                pick_left = np.abs(ox[j - 1] - xs) <= np.abs(ox[j] - xs)
                j = np.where(pick_left, j - 1, j)
            nb[ids, col] = other[j]
    return nb


class Tangler:
    """Applies swaps from one seeded stream; ``advance_to`` only moves forward.

    Draws come in fixed-size blocks, so the first N swaps are identical no
    matter how many are eventually requested.
    """

    def __init__(self, p: Placement, seed: int = 0):
        self.base = p
        self.nb = neighbor_table(p)
        self.occupied = np.sort(p.slot_of)
        self.obj_at = np.full(len(p.slots), -1, dtype=int)
        self.obj_at[p.slot_of] = np.arange(p.n_obj)
        self.slot_of = p.slot_of.copy()
        self.rng = np.random.default_rng(seed)
        self.done = 0
        self._pick = np.empty(0, dtype=int)
        self._u = np.empty(0)
        self._pos = 0

    def _refill(self):
        self._pick = self.rng.integers(0, len(self.occupied), size=_BLOCK)
        self._u = self.rng.random(_BLOCK)
        self._pos = 0

    def advance_to(self, n_swaps: int) -> None:
        if n_swaps < self.done:
            raise ValueError("the swap stream only moves forward")
        nb, occ, obj_at, slot_of = self.nb, self.occupied, self.obj_at, self.slot_of
        while self.done < n_swaps:
            if self._pos >= len(self._pick):
                self._refill()
            m = min(n_swaps - self.done, len(self._pick) - self._pos)
            picks = self._pick[self._pos:self._pos + m].tolist()
            us = self._u[self._pos:self._pos + m].tolist()
            for i, u in zip(picks, us):
                s = occ[i]
                cand = [t for t in nb[s] if t >= 0]
                if not cand:
                    continue
                t = cand[int(u * len(cand))]
                a, b = obj_at[s], obj_at[t]
                obj_at[s], obj_at[t] = b, a
                slot_of[a], slot_of[b] = t, s
            self._pos += m
            self.done += m

    def placement(self) -> Placement:
        return self.base.with_slots(self.slot_of)


def neighbor_swap_tangle(p: Placement, k: float, seed: int = 0) -> Placement:
    """Apply round(k * n_obj) random neighbor swaps to a copy of ``p``."""
    t = Tangler(p, seed)
    t.advance_to(round(k * p.n_obj))
    return t.placement()
