"""Cell width-regularized first-choice clustering (CWR-FC)."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

from ..netcore.hypergraph import (COMBINATIONAL, Hyperedge, Hypergraph, NetlistError,
                                  Vertex)
from .binpack import best_fit_decreasing


@dataclass
class ClusterMap:
    """Original vertex -> cluster assignment.

    ``members`` lists each cluster's original vertices in slot order and
    ``widths`` holds the summed member widths.
    """

    cmap: dict[str, str] = field(default_factory=dict)
    widths: dict[str, int] = field(default_factory=dict)
    members: dict[str, tuple[str, ...]] = field(default_factory=dict)
    iterations: int = 0

    @property
    def n_clusters(self) -> int:
        return len(self.members)

    def slot_index(self, vid: str) -> int:
        return self.members[self.cmap[vid]].index(vid)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["vertex_id", "cluster_id", "slot_index"])
            for cid in sorted(self.members):
                for i, vid in enumerate(self.members[cid]):
                    w.writerow([vid, cid, i])

    @classmethod
    def read_csv(cls, path, h: Hypergraph) -> ClusterMap:
        slots: dict[str, list[tuple[int, str]]] = {}
        with open(path, newline="") as f:
            r = csv.DictReader(f)
            for row in r:
                slots.setdefault(row["cluster_id"], []).append((int(row["slot_index"]), row["vertex_id"]))
        cm = cls()
        for cid, lst in slots.items():
            mem = tuple(v for _, v in sorted(lst))
            cm.members[cid] = mem
            cm.widths[cid] = sum(h.widths[v] for v in mem)
            for v in mem:
                cm.cmap[v] = cid
        return cm


def cluster_score(v_i: str, v_j: str, h: Hypergraph, partial_widths=None, cmap=None) -> float:
    """Connectivity of ``v_i`` and ``v_j`` per unit of combined width.

    Each shared hyperedge contributes weight / (|e| - 1). The denominator is
    W[v_i] plus the current width of the cluster holding ``v_j``.
    """
    widths = h.widths if partial_widths is None else partial_widths
    rep = v_j if cmap is None else cmap[v_j]
    num = 0.0
    inc_j = set(h.incident[v_j])
    for k in h.incident[v_i]:
        if k in inc_j:
            e = h.edges[k]
            num += e.weight / (len(e) - 1)
    return num / (h.widths[v_i] + widths[rep])


class _Level:
    """Index-based hypergraph used inside the clustering loop."""

    def __init__(self, widths, clusterable, members, edges):
        self.widths = widths            # list[int]
        self.clusterable = clusterable  # list[bool]
        self.members = members          # list[tuple[str, ...]]
        self.edges = edges              # list[(tuple[int, ...], weight)]
        inc = [[] for _ in widths]
        for k, (pins, _) in enumerate(edges):
            for p in pins:
                inc[p].append(k)
        self.incident = inc

    def __len__(self):
        return len(self.widths)


def _fc_pass(lv: _Level, w_max: int):
    n = len(lv)
    order = sorted(range(n), key=lambda i: lv.widths[i])
    visited = [False] * n
    cmap = list(range(n))
    w_next = list(lv.widths)
    merges = 0
    for vi in order:
        if visited[vi] or not lv.clusterable[vi]:
            continue
        acc: dict[int, float] = {}
        for k in lv.incident[vi]:
            pins, wt = lv.edges[k]
            share = wt / (len(pins) - 1)
            for vj in pins:
                if vj != vi and lv.clusterable[vj]:
                    acc[vj] = acc.get(vj, 0.0) + share
        best, phi_best = -1, 0.0
        for vj, conn in acc.items():
            denom = lv.widths[vi] + w_next[cmap[vj]]
            if denom <= w_max:
                phi = conn / denom
                if phi > phi_best:
                    best, phi_best = vj, phi
        visited[vi] = True
        if best == -1:
            w_next[vi] = lv.widths[vi]
        else:
            rep = cmap[best]
            cmap[vi] = rep
            w_next[rep] = lv.widths[vi] + w_next[rep]
            visited[best] = True
            merges += 1
    return cmap, w_next, merges


def _contract(lv: _Level, cmap, w_next) -> _Level:
    reps = sorted(set(cmap))
    new_id = {r: i for i, r in enumerate(reps)}
    members = [[] for _ in reps]
    for r in reps:
        members[new_id[r]].extend(lv.members[r])
    for v in range(len(lv)):
        if cmap[v] != v:
            members[new_id[cmap[v]]].extend(lv.members[v])
    widths = [w_next[r] for r in reps]
    clusterable = [lv.clusterable[r] for r in reps]
    edges = []
    for pins, wt in lv.edges:
        img = list(dict.fromkeys(new_id[cmap[p]] for p in pins))
        if len(img) >= 2:
            edges.append((tuple(img), wt))
    return _Level(widths, clusterable, [tuple(m) for m in members], edges)


def cwr_fc_cluster(h: Hypergraph, w_max: int, n_iter: int = 20, *,
                   pack: bool = True) -> tuple[Hypergraph, ClusterMap]:
    """Width-capped first-choice clustering followed by best-fit-decreasing packing.

    Only combinational vertices cluster; sequential, IO and tap vertices stay
    singletons and are never chosen as partners. Stops early once an
    iteration makes no merge. Returns the clustered hypergraph and the map.
    """
    if n_iter < 1:
        raise ValueError("n_iter must be >= 1")
    for v in h.vertices:
        if v.kind == COMBINATIONAL and h.widths[v.id] > w_max:
            raise ValueError(f"w_max={w_max} is below the width of {v.id} ({h.widths[v.id]})")
    idx = h.index
    lv = _Level([h.widths[v.id] for v in h.vertices],
                [v.kind == COMBINATIONAL for v in h.vertices],
                [(v.id,) for v in h.vertices],
                [(tuple(idx[p] for p in e.pins), e.weight) for e in h.edges])
    done = 0
    for _ in range(n_iter):
        cmap, w_next, merges = _fc_pass(lv, w_max)
        done += 1
        if merges == 0:
            break
        lv = _contract(lv, cmap, w_next)
    if pack:
        items = [(i, lv.widths[i]) for i in range(len(lv)) if lv.clusterable[i]]
        bins = best_fit_decreasing(items, w_max)
        cmap = list(range(len(lv)))
        w_next = list(lv.widths)
        for b in bins:
            rep = min(b)
            for i in b:
                cmap[i] = rep
            w_next[rep] = sum(lv.widths[i] for i in b)
        # members of a bin follow the packing order
        order = {i: pos for b in bins for pos, i in enumerate(b)}
        lv = _contract_ordered(lv, cmap, w_next, order)
    cm = _to_cluster_map(h, lv)
    cm.iterations = done
    return build_clustered(h, cm), cm


def _contract_ordered(lv, cmap, w_next, order):
    groups: dict[int, list[int]] = {}
    for v in range(len(lv)):
        groups.setdefault(cmap[v], []).append(v)
    reps = sorted(groups)
    members, widths, clusterable = [], [], []
    for r in reps:
        g = sorted(groups[r], key=lambda v: order.get(v, 0))
        members.append(tuple(m for v in g for m in lv.members[v]))
        widths.append(w_next[r])
        clusterable.append(lv.clusterable[r])
    return _Level(widths, clusterable, members, [])


def _to_cluster_map(h: Hypergraph, lv: _Level) -> ClusterMap:
    cm = ClusterMap()
    n = 0
    for mem, w in zip(lv.members, lv.widths):
        if len(mem) == 1:
            cid = mem[0]
        else:
            while f"cl{n}" in h:
                n += 1
            cid = f"cl{n}"
            n += 1
        cm.members[cid] = mem
        cm.widths[cid] = w
        for v in mem:
            cm.cmap[v] = cid
    return cm


def cluster_cell_name(h: Hypergraph, members) -> str:
    return "_".join(h.vertex(v).cell for v in members)


def build_clustered(h: Hypergraph, cm: ClusterMap) -> Hypergraph:
    """Hypergraph over clusters induced by ``cm``.

    Nets entirely inside one cluster are dropped; a net touching a cluster
    several times keeps one pin there. Pins of merged cells are renamed
    ``<pin>_<slot>``.
    """
    vertices, widths = [], {}
    for cid, mem in cm.members.items():
        if len(mem) == 1:
            v = h.vertex(mem[0])
            vertices.append(Vertex(cid, v.cell, v.kind, v.direction))
        else:
            vertices.append(Vertex(cid, cluster_cell_name(h, mem), COMBINATIONAL))
        widths[cid] = cm.widths[cid]
    edges = []
    for e in h.edges:
        pins, names, seen = [], [], set()
        for p, pn in zip(e.pins, e.pin_names):
            cid = cm.cmap.get(p)
            if cid is None:
                raise NetlistError(f"vertex {p} missing from cluster map")
            if cid in seen:
                continue
            seen.add(cid)
            pins.append(cid)
            names.append(pn if len(cm.members[cid]) == 1 else f"{pn}_{cm.slot_index(p)}")
        if len(pins) >= 2:
            edges.append(Hyperedge(e.id, tuple(pins), tuple(names), e.weight))
    return Hypergraph(vertices, edges, widths)
