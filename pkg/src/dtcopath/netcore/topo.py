"""Topological-parameter extraction and the naive width-regularization."""

from __future__ import annotations

from collections import deque
from dataclasses import astuple, dataclass

from .hypergraph import COMBINATIONAL, Hypergraph, NetlistError
from .library import CellLibrary

PARAM_NAMES = ("n_inst", "n_prim", "d_avg", "b_avg", "t_avg", "s_ratio")


class CombinationalCycleError(NetlistError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("combinational cycle: " + " -> ".join(self.cycle))


@dataclass(frozen=True)
class TopoParams:
    """The six topological parameters (T1..T6)."""

    n_inst: float
    n_prim: float
    d_avg: float
    b_avg: float | None
    t_avg: float
    s_ratio: float

    def as_tuple(self) -> tuple:
        return astuple(self)

    @classmethod
    def from_seq(cls, values) -> TopoParams:
        values = list(values)
        if len(values) != 6:
            raise ValueError("need exactly six parameter values")
        return cls(*values)

    def replace(self, **kw) -> TopoParams:
        d = dict(zip(PARAM_NAMES, self.as_tuple()))
        d.update(kw)
        return TopoParams(**d)

    def __iter__(self):
        return iter(self.as_tuple())


def comb_depths(h: Hypergraph, lib: CellLibrary | None = None) -> dict[str, int]:
    """Maximum count of combinational stages ending at each combinational cell.

    Sequential cells and primary inputs launch at depth 0. Raises
    CombinationalCycleError with a witness when the combinational subgraph
    has a cycle.
    """
    comb = {v.id for v in h.vertices if v.kind == COMBINATIONAL}
    succ: dict[str, list[str]] = {c: [] for c in comb}
    indeg = dict.fromkeys(comb, 0)
    for e in h.edges:
        drv = e.driver
        if drv not in comb:
            continue
        for s in e.sinks:
            if s in comb:
                succ[drv].append(s)
                indeg[s] += 1
    depth = dict.fromkeys(comb, 1)
    queue = deque(v.id for v in h.vertices if v.id in comb and indeg[v.id] == 0)
    done = 0
    while queue:
        u = queue.popleft()
        done += 1
        for w in succ[u]:
            if depth[u] + 1 > depth[w]:
                depth[w] = depth[u] + 1
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if done != len(comb):
        raise CombinationalCycleError(_find_cycle({c for c in comb if indeg[c] > 0}, succ))
    return depth


def _find_cycle(nodes, succ):
    # every node left after Kahn's pass has a predecessor that is also left,
    # so walking predecessors must revisit a node
    pred = {n: [] for n in nodes}
    for u in nodes:
        for w in succ[u]:
            if w in nodes:
                pred[w].append(u)
    path, pos = [], {}
    u = min(nodes)
    while u not in pos:
        pos[u] = len(path)
        path.append(u)
        u = pred[u][0]
    cycle = path[pos[u]:][::-1]
    return cycle + [cycle[0]]


def endpoint_depths(h: Hypergraph, lib: CellLibrary) -> list[int]:
    """Depth per timing endpoint (sequential data inputs and primary outputs)."""
    depth = comb_depths(h)
    out = []
    for e in h.edges:
        d = depth.get(e.driver, 0)
        for s, pin in zip(e.sinks, e.pin_names[1:]):
            v = h.vertex(s)
            if v.is_io:
                out.append(d)
            elif v.is_seq and pin != lib[v.cell].clock:
                out.append(d)
    return out


def bin_grid_side(n_inst: int) -> int:
    """Side of the square bin grid holding about sqrt(n_inst) instances per bin."""
    return max(1, round(n_inst ** 0.25))


def average_bbox_bins(h: Hypergraph, placement) -> float:
    centers = placement.centers()
    n = h.n_inst
    g = bin_grid_side(n)
    fp = placement.fp
    sx, sy = g / fp.width_nm, g / fp.height_nm
    total, count = 0.0, 0
    for e in h.edges:
        bx, by = [], []
        for p in e.pins:
            if p in centers:
                x, y = centers[p]
                bx.append(min(g - 1, int(x * sx)))
                by.append(min(g - 1, int(y * sy)))
        count += 1
        if len(bx) >= 2:
            total += ((max(bx) - min(bx)) + (max(by) - min(by))) / 2.0
    return total / count if count else 0.0


def extract_topo_params(h: Hypergraph, lib: CellLibrary, placement=None) -> TopoParams:
    if not h.vertices:
        raise NetlistError("empty hypergraph")
    n_inst = h.n_inst
    n_prim = sum(1 for v in h.vertices if v.is_io)
    d_avg = sum(len(e) for e in h.edges) / len(h.edges) if h.edges else 0.0
    ends = endpoint_depths(h, lib)
    t_avg = sum(ends) / len(ends) if ends else 0.0
    n_seq = sum(1 for v in h.vertices if v.is_seq)
    s_ratio = n_seq / n_inst if n_inst else 0.0
    b_avg = average_bbox_bins(h, placement) if placement is not None else None
    return TopoParams(n_inst, n_prim, d_avg, b_avg, t_avg, s_ratio)


def width_regularize_naive(h: Hypergraph, lib: CellLibrary) -> Hypergraph:
    """Inflate every combinational cell to the widest combinational cell of ``lib``."""
    w_max = lib.max_comb_width
    widths = {v.id: w_max for v in h.vertices if v.kind == COMBINATIONAL}
    return h.with_widths(widths)


def total_width(h: Hypergraph) -> int:
    return sum(w for vid, w in h.widths.items() if not h.vertex(vid).is_io)
