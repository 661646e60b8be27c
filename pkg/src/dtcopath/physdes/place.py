"""Slot placement of equal-span objects: quadratic placement with recursive bisection."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix, diags
from scipy.sparse.linalg import eigsh, splu

from ..netcore.hypergraph import Hypergraph
from .floorplan import Floorplan


class PlacementError(ValueError):
    pass


@dataclass(eq=False)
class Placement:
    """Objects on a slot grid. Primary IOs sit on the core boundary."""

    fp: Floorplan
    h: Hypergraph
    span: int
    slots: np.ndarray          # (S, 2) row, left site
    obj_ids: tuple[str, ...]   # placed (non-IO) vertices
    slot_of: np.ndarray        # (n_obj,) slot index per object
    io_xy: dict[str, tuple[float, float]] = field(default_factory=dict)

    @property
    def n_obj(self) -> int:
        return len(self.obj_ids)

    @property
    def achieved_util(self) -> float:
        return self.n_obj * self.span / self.fp.n_free_sites

    def with_slots(self, slot_of: np.ndarray) -> Placement:
        return Placement(self.fp, self.h, self.span, self.slots, self.obj_ids,
                         np.asarray(slot_of).copy(), dict(self.io_xy))

    def sites(self) -> dict[str, tuple[int, int]]:
        rs = self.slots[self.slot_of]
        return {v: (int(r), int(s)) for v, (r, s) in zip(self.obj_ids, rs)}

    def xy(self) -> np.ndarray:
        """Object centers in nm, (n_obj, 2)."""
        rs = self.slots[self.slot_of]
        x = (rs[:, 1] + self.span / 2.0) * self.fp.cpp_nm
        y = (rs[:, 0] + 0.5) * self.fp.row_height_nm
        return np.column_stack([x, y])

    def centers(self) -> dict[str, tuple[float, float]]:
        out = {v: (float(x), float(y)) for v, (x, y) in zip(self.obj_ids, self.xy())}
        out.update(self.io_xy)
        return out

    def check_legal(self) -> None:
        if len(set(self.slot_of.tolist())) != self.n_obj:
            raise PlacementError("two objects share a slot")
        free = self.fp.free_mask()
        for r, s in self.slots[self.slot_of]:
            if s < 0 or s + self.span > self.fp.sites_per_row or not free[r, s:s + self.span].all():
                raise PlacementError(f"object at ({r}, {s}) overlaps a keepout or the core edge")

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["vertex_id", "row", "site"])
            for v, (r, s) in sorted(self.sites().items()):
                w.writerow([v, r, s])


def connectivity(h: Hypergraph, ids, clique_limit: int = 8):
    """Symmetric object adjacency: clique model for small nets, star for large ones."""
    pos = {v: i for i, v in enumerate(ids)}
    rows, cols, vals = [], [], []
    for e in h.edges:
        pins = [pos[p] for p in e.pins if p in pos]
        k = len(pins)
        if k < 2:
            continue
        w = e.weight / (k - 1)
        if k <= clique_limit:
            for a in range(k):
                for b in range(a + 1, k):
                    rows.append(pins[a])
                    cols.append(pins[b])
                    vals.append(w)
        else:
            for b in pins[1:]:
                rows.append(pins[0])
                cols.append(b)
                vals.append(w)
    n = len(ids)
    a = coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    return (a + a.T).tocsr()


def _laplacian(adj):
    deg = np.asarray(adj.sum(axis=1)).ravel()
    return diags(deg) - adj, deg


def _spectral(lap, deg, rng):
    """Two smallest nontrivial Laplacian eigenvectors, as a 2-D embedding.

    Falls back to noise on tiny graphs.
    """
    n = lap.shape[0]
    x0 = rng.random((n, 2))
    if n < 8:
        return x0[:, 0], x0[:, 1]
    try:
        # shift slightly below zero so the singular Laplacian factors
        vals, vecs = eigsh(lap.tocsc(), k=3, sigma=-1e-3 * (deg.mean() + 1), which="LM",
                           v0=x0[:, 0])
    except Exception:   # pragma: no cover - ARPACK hiccup
        return x0[:, 0], x0[:, 1]
    order = np.argsort(vals)
    return (vecs[:, order[1]] + 1e-12 * x0[:, 1], vecs[:, order[2]] + 1e-12 * x0[:, 0])


def _rescale(v, lo, hi):
    span = np.ptp(v)
    if span == 0:
        return np.full(len(v), 0.5 * (lo + hi))
    return lo + (v - v.min()) * (hi - lo) / span


def _assign(objs, sl, key_x, key_y, slots_rc, out):
    # spread objects evenly over the leaf, matching row-major orders
    order = sl[np.lexsort((slots_rc[sl, 1], slots_rc[sl, 0]))]
    n, s = len(objs), len(order)
    picks = order[((np.arange(n) + 0.5) * s / n).astype(int)]
    prow = slots_rc[picks, 0]
    objs = objs[np.lexsort((key_x[objs], key_y[objs]))]
    # rows take their share by y, then x within each row
    out_objs = []
    for r in np.unique(prow):
        cnt = int((prow == r).sum())
        chunk, objs = objs[:cnt], objs[cnt:]
        out_objs.append(chunk[np.argsort(key_x[chunk], kind="stable")])
    out[np.concatenate(out_objs)] = picks


def place(h: Hypergraph, fp: Floorplan, span: int, seed: int = 0, leaf: int = 4,
          anchor: float = 0.3) -> Placement:
    """Place every non-IO vertex of ``h`` into a span-wide slot of ``fp``.

    Quadratic placement with recursive bisection: regions are halved along
    their longer side and objects split in proportion to slot capacity by
    their current coordinate; after each level the quadratic wirelength is
    re-solved with every object weakly anchored to its own position clamped
    into its region, so connections leaving a region still pull on the next
    cut. Coordinates start from a 2-D spectral embedding. ``seed`` permutes
    tie-breaking.
    """
    obj_ids = tuple(v.id for v in h.vertices if not v.is_io)
    slots = fp.slots(span)
    n = len(obj_ids)
    if n > len(slots):
        raise PlacementError(f"{n} objects but only {len(slots)} slots of span {span}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    adj = connectivity(h, [obj_ids[i] for i in perm])
    lap, deg = _laplacian(adj)
    cx = (slots[:, 1] + span / 2.0) * fp.cpp_nm
    cy = (slots[:, 0] + 0.5) * fp.row_height_nm
    slot_of_perm = np.empty(n, dtype=int)

    e1, e2 = _spectral(lap, deg, rng)
    # the first cut runs across the longer side; it gets the Fiedler vector
    if np.ptp(cx) >= np.ptp(cy):
        kx, ky = _rescale(e1, cx.min(), cx.max()), _rescale(e2, cy.min(), cy.max())
    else:
        kx, ky = _rescale(e2, cx.min(), cx.max()), _rescale(e1, cy.min(), cy.max())
    regions = [(np.arange(n), np.arange(len(slots)))]
    alpha = anchor * deg + 1e-3 * (deg.mean() + 1.0)
    solver = None
    while regions:
        nxt = []
        for objs, sl in regions:
            if len(objs) == 0:
                continue
            if len(objs) <= leaf or len(sl) <= leaf:
                _assign(objs, sl, kx, ky, slots, slot_of_perm)
                continue
            xs, ys = cx[sl], cy[sl]
            horiz = np.ptp(xs) >= np.ptp(ys)
            sl = sl[np.argsort(xs if horiz else ys, kind="stable")]
            half = len(sl) // 2
            left, right = sl[:half], sl[half:]
            k = round(len(objs) * len(left) / len(sl))
            k = min(max(k, len(objs) - len(right)), len(left))
            order = objs[np.argsort((kx if horiz else ky)[objs], kind="stable")]
            nxt.append((order[:k], left))
            nxt.append((order[k:], right))
        regions = nxt
        if not regions:
            break
        # re-solve with every object anchored to its position clamped into its
        # region, so the axis a cut did not touch keeps its information
        ax, ay = np.empty(n), np.empty(n)
        for objs, sl in regions:
            ax[objs] = np.clip(kx[objs], cx[sl].min(), cx[sl].max())
            ay[objs] = np.clip(ky[objs], cy[sl].min(), cy[sl].max())
        if solver is None:
            solver = splu((lap + diags(alpha)).tocsc())
        kx = solver.solve(alpha * ax)
        ky = solver.solve(alpha * ay)

    slot_of = np.empty(n, dtype=int)
    slot_of[perm] = slot_of_perm
    p = Placement(fp, h, span, slots, obj_ids, slot_of)
    p.io_xy = _io_positions(h, p)
    return p


def _io_positions(h: Hypergraph, p: Placement) -> dict[str, tuple[float, float]]:
    """Each IO goes to the core edge nearest the centroid of the cells it touches."""
    xy = dict(zip(p.obj_ids, p.xy()))
    w, ht = p.fp.width_nm, p.fp.height_nm
    out = {}
    for v in h.vertices:
        if not v.is_io:
            continue
        pts = [xy[q] for k in h.incident[v.id] for q in h.edges[k].pins if q in xy]
        cx, cy = np.mean(pts, axis=0) if pts else (w / 2, 0.0)
        dists = (cx, w - cx, cy, ht - cy)
        side = int(np.argmin(dists))
        out[v.id] = ((0.0, cy), (w, cy), (cx, 0.0), (cx, ht))[side]
    return {k: (float(a), float(b)) for k, (a, b) in out.items()}
