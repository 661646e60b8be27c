"""Artificial netlist generation toward a topological-parameter target.

The generator builds a levelized DAG of combinational cells between
register stages. Each topological parameter has one knob:

* instance, IO and sequential counts are exact;
* timing-endpoint depths are sampled and then nudged so their mean hits
  ``t_avg``; a cell at level ``l`` always has a fanin at level ``l - 1``,
  so its depth is exactly ``l``;
* the total number of sink pins is fixed by ``d_avg``, which sets the
  input-count mix of the combinational cells;
* fanin sources are picked as the nearest of ``m`` random candidates in a
  virtual unit square, with ``m`` shrinking as ``b_avg`` grows.
"""

from __future__ import annotations

import math

import numpy as np

from ..netcore.hypergraph import (COMBINATIONAL, PRIMARY_IO, SEQUENTIAL,
                                  Hyperedge, Hypergraph, Vertex)
from ..netcore.library import CellLibrary
from ..netcore.topo import TopoParams

LOCALITY_SAMPLES = 200
_BASE_FANIN = {1: 0.35, 2: 0.40, 3: 0.15, 4: 0.10}
_DRIVE_WEIGHT = {"X1": 12.0, "X2": 2.0, "X4": 0.5, "X8": 0.25}
_SEQ_WEIGHT = {"DFFHQN_X1": 6.0, "DFFRNQ_X1": 3.0, "LHQ_X1": 1.0}


class InfeasibleParams(ValueError):
    """The requested parameter combination cannot be realized."""


def _cell_weight(name):
    return _DRIVE_WEIGHT.get(name.rsplit("_", 1)[-1], 4.0)


def _tilted_fanin(mean, ks):
    base = np.array([_BASE_FANIN.get(k, 0.1) for k in ks])
    ks = np.asarray(ks, dtype=float)

    def m(lam):
        w = base * np.exp(lam * ks)
        return float((w * ks).sum() / w.sum())

    lo, hi = -50.0, 50.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if m(mid) < mean:
            lo = mid
        else:
            hi = mid
    w = base * np.exp(0.5 * (lo + hi) * ks)
    return w / w.sum()


def _fanin_counts(n_comb, total, ks, rng):
    """Per-cell input counts summing to ``total``."""
    p = _tilted_fanin(total / n_comb, ks)
    raw = p * n_comb
    counts = np.floor(raw).astype(int)
    for i in np.argsort(-(raw - counts), kind="stable")[: n_comb - counts.sum()]:
        counts[i] += 1
    ks = list(ks)
    diff = total - int(np.dot(counts, ks))
    # shift single cells between adjacent fanin classes until the pin total matches
    while diff != 0:
        moved = False
        order = range(len(ks) - 1) if diff > 0 else range(len(ks) - 1, 0, -1)
        for i in order:
            j = i + (1 if diff > 0 else -1)
            gain = ks[j] - ks[i]
            if counts[i] > 0 and abs(diff - gain) < abs(diff):
                counts[i] -= 1
                counts[j] += 1
                diff -= gain
                moved = True
                break
        if not moved:
            break
    fanins = np.repeat(ks, counts)
    rng.shuffle(fanins)
    return fanins


def _endpoint_depths(n_end, t, rng):
    spread = max(0, min(math.floor(t) - 1, round(t / 2)))
    lo = max(1, math.floor(t) - spread)
    hi = math.ceil(t) + spread
    depths = rng.integers(lo, hi + 1, size=n_end)
    goal = round(t * n_end)
    diff = goal - int(depths.sum())
    order = rng.permutation(n_end)
    i = 0
    while diff != 0 and i < 50 * n_end:
        e = order[i % n_end]
        if diff > 0 and depths[e] < hi:
            depths[e] += 1
            diff -= 1
        elif diff < 0 and depths[e] > 1:
            depths[e] -= 1
            diff += 1
        i += 1
    return depths


def _level_sizes(depths, n_comb, n_levels, mean_fanin):
    """Cells per level, proportional to the endpoints each level can reach.

    A level may not hold more cells than the pins above it can consume, so
    surplus is pushed down toward level 1.
    """
    reach = np.array([(depths >= l).sum() for l in range(1, n_levels + 1)], dtype=float)
    ends = np.bincount(depths, minlength=n_levels + 1)[1:]
    spare = n_comb - n_levels
    raw = reach / reach.sum() * spare
    sizes = np.floor(raw).astype(int)
    for i in np.argsort(-(raw - sizes), kind="stable")[: spare - sizes.sum()]:
        sizes[i] += 1
    sizes += 1
    above = 0
    for i in range(n_levels - 1, 0, -1):
        nxt = sizes[i + 1] if i + 1 < n_levels else 0
        cap = max(1, ends[i] + nxt + int(0.5 * (mean_fanin - 1.0) * above))
        if sizes[i] > cap:
            sizes[i - 1] += sizes[i] - cap
            sizes[i] = cap
        above += sizes[i]
    return sizes


class _Pool:
    """Index set with O(1) add/remove and random sampling."""

    def __init__(self):
        self.items, self.pos = [], {}

    def add(self, x):
        if x not in self.pos:
            self.pos[x] = len(self.items)
            self.items.append(x)

    def remove(self, x):
        i = self.pos.pop(x, None)
        if i is None:
            return
        last = self.items.pop()
        if i < len(self.items):
            self.items[i] = last
            self.pos[last] = i

    def __len__(self):
        return len(self.items)


class _Builder:
    def __init__(self, n_nodes, xy, rng, m):
        self.xy, self.rng, self.m = xy, rng, m
        self.fanout = np.zeros(n_nodes, dtype=int)

    def nearest(self, cands, at, exclude=()):
        """Nearest of up to ``m`` random draws from ``cands`` (a sequence)."""
        n = len(cands)
        if n == 0:
            return None
        draws = self.rng.integers(n, size=self.m)
        best, best_d = None, math.inf
        for i in draws:
            c = cands[i]
            if c in exclude:
                continue
            dx, dy = self.xy[c] - self.xy[at]
            d = dx * dx + dy * dy
            if d < best_d:
                best, best_d = c, d
        if best is None:
            free = [c for c in cands if c not in exclude]
            if free:
                best = free[int(self.rng.integers(len(free)))]
        return best


def generate_netlist(params: TopoParams, lib: CellLibrary, seed: int = 0) -> Hypergraph:
    """Build an artificial gate-level netlist aimed at ``params``.

    Deterministic for a fixed ``(params, seed)``. Raises InfeasibleParams
    when the combination cannot be realized (net degree below 2, no
    combinational cells, fewer cells than logic levels, or a fanin budget
    too small to give every driver a sink).
    """
    n = int(round(params.n_inst))
    n_prim = int(round(params.n_prim))
    d, t, s = float(params.d_avg), float(params.t_avg), float(params.s_ratio)
    b = 0.5 if params.b_avg is None else float(params.b_avg)
    if n < 2 or n_prim < 2:
        raise InfeasibleParams("need at least 2 instances and 2 primary IOs")
    if not 0 < s <= 1:
        raise InfeasibleParams("s_ratio must lie in (0, 1]")
    if d < 2:
        raise InfeasibleParams("average net degree below 2 is unreachable (nets have >= 2 pins)")
    if t < 1:
        raise InfeasibleParams("t_avg must be at least 1")
    n_seq = round(s * n)
    n_comb = n - n_seq
    if n_comb == 0:
        raise InfeasibleParams("s_ratio leaves no combinational cells for t_avg >= 1")
    n_pi = (n_prim + 1) // 2
    n_po = n_prim - n_pi
    n_end = n_seq + n_po

    rng = np.random.default_rng(seed)
    depths = _endpoint_depths(n_end, t, rng)
    n_levels = int(depths.max())
    if n_comb < n_levels:
        raise InfeasibleParams(f"{n_comb} combinational cells cannot span {n_levels} levels")
    comb_cells = [c for c in lib.combinational()]
    by_k: dict[int, list] = {}
    for c in comb_cells:
        by_k.setdefault(c.n_inputs, []).append(c)
    ks = sorted(by_k)
    n_drivers = n_comb + n_seq + n_pi
    pin_total = round((d - 1.0) * n_drivers) - n_end
    if pin_total < n_comb * ks[0] or pin_total > n_comb * ks[-1]:
        raise InfeasibleParams(f"d_avg={d} needs {pin_total} fanin pins for {n_comb} cells")
    fanins = _fanin_counts(n_comb, pin_total, ks, rng)
    sizes = _level_sizes(depths, n_comb, n_levels, pin_total / n_comb)

    # node numbering: [0, n_seq) flops, [n_seq, n_seq+n_pi) PIs, then comb cells by level
    n_src = n_seq + n_pi
    n_nodes = n_src + n_comb
    xy = rng.random((n_nodes, 2))
    m = 1 + round(LOCALITY_SAMPLES * (1.0 - min(max(b, 0.0), 1.0)) ** 2)
    bld = _Builder(n_nodes, xy, rng, m)

    level = np.zeros(n_nodes, dtype=int)
    inputs: list[list[int]] = [[] for _ in range(n_nodes)]
    by_level: list[list[int]] = [list(range(n_src))]
    uncovered_lvl = [_Pool() for _ in range(n_levels + 1)]
    uncovered_any = _Pool()
    below: list[int] = list(range(n_src))
    for i in range(n_src):
        uncovered_lvl[0].add(i)
        uncovered_any.add(i)

    def connect(drv):
        bld.fanout[drv] += 1
        uncovered_lvl[level[drv]].remove(drv)
        uncovered_any.remove(drv)

    ep_driver = np.full(n_end, -1)
    ep_at_level: list[list[int]] = [[] for _ in range(n_levels + 1)]
    for e, dep in enumerate(depths):
        ep_at_level[dep].append(e)
    ep_xy = rng.random((n_end, 2))
    # endpoints that are flop D pins sit at their flop
    ep_xy[:n_seq] = xy[:n_seq]

    nxt = n_src
    low = 0
    for lv in range(1, n_levels + 1):
        prev = by_level[lv - 1]
        cur = list(range(nxt, nxt + sizes[lv - 1]))
        nxt += sizes[lv - 1]
        for c in cur:
            level[c] = lv
            pool = uncovered_lvl[lv - 1].items
            first = bld.nearest(pool, c) if pool else bld.nearest(prev, c)
            inputs[c].append(first)
            connect(first)
            want = int(fanins[c - n_src])
            chosen = {first}
            for _ in range(want - 1):
                # the lowest levels have the fewest possible consumers left
                pick = None
                while low < lv and not len(uncovered_lvl[low]):
                    low += 1
                for lo in range(low, lv):
                    if len(uncovered_lvl[lo]):
                        pick = bld.nearest(uncovered_lvl[lo].items, c, chosen)
                        if pick is not None:
                            break
                if pick is None:
                    pick = bld.nearest(below, c, chosen)
                if pick is None:
                    break
                inputs[c].append(pick)
                chosen.add(pick)
                connect(pick)
        for c in cur:
            uncovered_lvl[lv].add(c)
            uncovered_any.add(c)
        for e in ep_at_level[lv]:
            pool = uncovered_lvl[lv].items if len(uncovered_lvl[lv]) else None
            cands = pool if pool else cur
            # nearest to the endpoint location
            draws = rng.integers(len(cands), size=bld.m)
            dist = ((xy[[cands[i] for i in draws]] - ep_xy[e]) ** 2).sum(axis=1)
            drv = cands[int(draws[int(np.argmin(dist))])]
            ep_driver[e] = drv
            connect(drv)
        by_level.append(cur)
        below.extend(cur)

    _cover_leftovers(uncovered_any, level, inputs, ep_driver, depths, by_level, bld, rng)

    return _assemble(lib, by_k, n_seq, n_pi, n_po, inputs, ep_driver, level, rng)


def _cover_leftovers(uncovered, level, inputs, ep_driver, depths, by_level, bld, rng):
    """Give every driver without a sink one, by rewiring a redundant connection.

    A connection is redundant when its current driver has other sinks.
    First-input slots are only rewired to a driver on the same level, so
    every cell keeps its depth.
    """
    fanout = bld.fanout
    n_levels = len(by_level) - 1
    later = [[] for _ in range(n_levels + 2)]
    for lv in range(n_levels, -1, -1):
        later[lv] = later[lv + 1] + by_level[lv + 1] if lv < n_levels else []

    def try_cell(c, u, lu):
        ins = inputs[c]
        if u in ins:
            return False
        start = 0 if level[c] == lu + 1 else 1
        for j in range(start, len(ins)):
            old = ins[j]
            if fanout[old] >= 2 and (j > 0 or level[old] == lu):
                ins[j] = u
                fanout[old] -= 1
                fanout[u] += 1
                return True
        return False

    for u in list(uncovered.items):
        lu = int(level[u])
        done = False
        for e in np.flatnonzero((depths == lu) & (ep_driver >= 0)) if lu > 0 else ():
            old = ep_driver[e]
            if fanout[old] >= 2:
                ep_driver[e] = u
                fanout[old] -= 1
                fanout[u] += 1
                done = True
                break
        if done:
            continue
        cands = later[lu]
        if cands:
            draws = rng.integers(len(cands), size=min(64, len(cands)))
            dist = ((bld.xy[[cands[i] for i in draws]] - bld.xy[u]) ** 2).sum(axis=1)
            for i in np.argsort(dist, kind="stable"):
                if try_cell(cands[draws[i]], u, lu):
                    done = True
                    break
            if not done:
                for c in cands:
                    if try_cell(c, u, lu):
                        done = True
                        break
        if not done:
            raise InfeasibleParams(
                "fanin budget too small to give every driver a sink; "
                "raise d_avg or t_avg, or lower n_inst")


def _pick_cell(cands, rng):
    w = np.array([_cell_weight(c.name) for c in cands])
    return cands[int(rng.choice(len(cands), p=w / w.sum()))]


def _assemble(lib, by_k, n_seq, n_pi, n_po, inputs, ep_driver, level, rng):
    n_src = n_seq + n_pi
    n_nodes = len(inputs)
    names = ([f"ff{i}" for i in range(n_seq)] + [f"pi{i}" for i in range(n_pi)]
             + [f"g{i}" for i in range(n_nodes - n_src)])
    seq_cells = lib.sequential()
    if n_seq and not seq_cells:
        raise InfeasibleParams("library has no sequential cells")
    seq_w = np.array([_SEQ_WEIGHT.get(c.name, 1.0) for c in seq_cells]) if seq_cells else None
    specs: list = [None] * n_nodes
    for i in range(n_seq):
        specs[i] = seq_cells[int(rng.choice(len(seq_cells), p=seq_w / seq_w.sum()))]
    ks = sorted(by_k)
    for c in range(n_src, n_nodes):
        k = len(inputs[c])
        if k not in by_k:
            k = min(ks, key=lambda kk: (abs(kk - k), kk))
            inputs[c] = inputs[c][:k]
        specs[c] = _pick_cell(by_k[k], rng)

    vertices, widths = [], {}
    for i in range(n_nodes):
        if n_seq <= i < n_src:
            vertices.append(Vertex(names[i], None, PRIMARY_IO, "input"))
            widths[names[i]] = 0
        else:
            kind = SEQUENTIAL if i < n_seq else COMBINATIONAL
            vertices.append(Vertex(names[i], specs[i].name, kind))
            widths[names[i]] = specs[i].width_cpp
    po_names = [f"po{i}" for i in range(n_po)]
    for p in po_names:
        vertices.append(Vertex(p, None, PRIMARY_IO, "output"))
        widths[p] = 0

    sinks: list[list[tuple[str, str]]] = [[] for _ in range(n_nodes)]
    for c in range(n_src, n_nodes):
        for j, drv in enumerate(inputs[c]):
            sinks[drv].append((names[c], specs[c].inputs[j]))
    for e, drv in enumerate(ep_driver):
        if e < n_seq:
            sinks[drv].append((names[e], specs[e].inputs[0]))
        else:
            sinks[drv].append((po_names[e - n_seq], ""))
    edges = []
    for i in range(n_nodes):
        if not sinks[i]:
            continue
        out_pin = "" if n_seq <= i < n_src else specs[i].output
        pins = (names[i],) + tuple(s for s, _ in sinks[i])
        pnames = (out_pin,) + tuple(p for _, p in sinks[i])
        edges.append(Hyperedge(f"n_{names[i]}", pins, pnames))
    return Hypergraph(vertices, edges, widths)
