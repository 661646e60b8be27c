"""Placement-induced clustering and regularized-netlist comparison stats."""

from __future__ import annotations

from dataclasses import dataclass

from ..netcore.hypergraph import Hypergraph
from ..netcore.library import TechProfile
from ..netcore.topo import total_width
from .cluster import ClusterMap, build_clustered


def placement_induced_cluster(p, w_max: int, original: Hypergraph | None = None):
    """Cluster row neighbours of a placement, left to right.

    ``p`` places (a width-inflated copy of) the original netlist; real
    widths come from ``original`` when given. A cluster grows while its
    real width stays within ``w_max``; a sequential cell closes the current
    cluster and stays a singleton.
    """
    h = original if original is not None else p.h
    sites = p.sites()
    by_row: dict[int, list[tuple[int, str]]] = {}
    for v, (r, s) in sites.items():
        by_row.setdefault(r, []).append((s, v))
    groups: list[list[str]] = []
    for r in sorted(by_row):
        cur, cur_w = [], 0
        for _, v in sorted(by_row[r]):
            w = h.widths[v]
            if not h.vertex(v).is_comb:
                if cur:
                    groups.append(cur)
                groups.append([v])
                cur, cur_w = [], 0
                continue
            if cur and cur_w + w > w_max:
                groups.append(cur)
                cur, cur_w = [], 0
            cur.append(v)
            cur_w += w
        if cur:
            groups.append(cur)
    groups.extend([v.id] for v in h.vertices if v.id not in sites)
    cm = ClusterMap()
    n = 0
    for mem in groups:
        if len(mem) == 1:
            cid = mem[0]
        else:
            while f"pc{n}" in h:
                n += 1
            cid = f"pc{n}"
            n += 1
        cm.members[cid] = tuple(mem)
        cm.widths[cid] = sum(h.widths[v] for v in mem)
        for v in mem:
            cm.cmap[v] = cid
    return build_clustered(h, cm), cm


@dataclass(frozen=True)
class RegularizedStats:
    label: str
    n_inst: int
    core_area_um2: float
    actual_util: float
    wirelength_um: float | None
    avg_fanout: float

    HEADER = ("label", "n_inst", "core_area_um2", "actual_util", "wirelength_um", "avg_fanout")

    def row(self) -> list:
        return [self.label, self.n_inst, self.core_area_um2, self.actual_util,
                self.wirelength_um, self.avg_fanout]


def avg_fanout(h: Hypergraph) -> float:
    return sum(len(e) - 1 for e in h.edges) / len(h.edges) if h.edges else 0.0


def regularized_netlist_stats(original: Hypergraph, regularized: Hypergraph, tech: TechProfile,
                              density: float, span: int, label: str = "",
                              route_it: bool = False, seed: int = 0) -> RegularizedStats:
    """Instances, core area, actual utilization, wirelength and fanout of a
    width-regularized netlist placed at ``density``.

    Actual utilization is the real cell width of ``original`` over the
    free sites of the core sized for ``regularized`` at ``density``.
    Wirelength needs a place-and-route pass and is only computed when
    ``route_it`` is set.
    """
    from ..physdes.floorplan import Floorplan
    n_obj = regularized.n_inst
    fp = Floorplan.for_cells(n_obj, span, density, tech.cpp_nm, tech.row_height_nm)
    actual = total_width(original) / fp.n_free_sites
    wl = None
    if route_it:
        from ..physdes.place import place
        from ..physdes.route import route
        wl = route(place(regularized, fp, span, seed=seed), tech).wirelength_nm * 1e-3
    return RegularizedStats(label, n_obj, fp.area_um2, actual, wl, avg_fanout(regularized))
