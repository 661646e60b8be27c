"""Gcell global routing with L/Z patterns and an overflow-count DRC proxy."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from ..netcore.library import TechProfile
from .place import Placement

BEOL_PITCH_NM = {"M4": 64.0, "M5": 64.0, "M6": 64.0, "M7": 64.0, "M8": 64.0, "M9": 64.0,
                 "M10": 64.0, "M11": 64.0, "M12": 720.0, "M13": 720.0}
LAYER_ORDER = ("M0", "M1", "M2", "M3", "M4", "M5", "M6", "M7", "M8", "M9", "M10", "M11",
               "M12", "M13")


@dataclass(frozen=True)
class Layer:
    name: str
    horizontal: bool
    pitch_nm: float


def layer_stack(tech: TechProfile, top: str = "M3") -> list[Layer]:
    """Routing layers M0..top; even layers horizontal. M0 offers RT tracks per row."""
    if top not in LAYER_ORDER:
        raise ValueError(f"unknown layer {top!r}")
    out = []
    for name in LAYER_ORDER[: LAYER_ORDER.index(top) + 1]:
        if name == "M0":
            pitch = tech.row_height_nm / tech.rt
        elif name == "M1":
            pitch = tech.m1p_nm
        elif name in ("M2", "M3"):
            pitch = tech.m2p_nm
        else:
            pitch = BEOL_PITCH_NM[name]
        out.append(Layer(name, int(name[1:]) % 2 == 0, pitch))
    return out


@dataclass(frozen=True)
class RouteConfig:
    gcell_sites: int = 15
    gcell_rows: int | None = None   # default: closest to a square gcell
    top_layer: str = "M3"
    penalty: float = 0.5
    reroute: bool = True
    hot_quantile: float = 0.9
    capacity_scale: float = 0.8    # usable track fraction (pin access, via blockage)


@dataclass
class RouteResult:
    net_length_nm: dict[str, float]
    usage_h: np.ndarray           # (gy, gx-1) horizontal-edge usage
    usage_v: np.ndarray           # (gy-1, gx)
    layers: list[Layer]
    layer_caps: list[int]         # per-edge capacity of each layer
    overflow_count: int
    gcell_nm: tuple[float, float] = (0.0, 0.0)
    layer_overflow: dict[str, int] = field(default_factory=dict)

    @property
    def drc_proxy(self) -> int:
        return self.overflow_count

    @property
    def wirelength_nm(self) -> float:
        return float(sum(self.net_length_nm.values()))

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["net", "length_nm"])
            for k in sorted(self.net_length_nm):
                w.writerow([k, repr(self.net_length_nm[k])])


def _layer_capacities(layers, gw, gh, derates, scale):
    caps = []
    for ly in layers:
        span = gh if ly.horizontal else gw
        tracks = span / ly.pitch_nm
        d = 0.0 if derates is None else float(derates.get(ly.name, 0.0))
        caps.append(max(0, math.floor(tracks * (1.0 - d) * scale + 1e-9)))
    return caps


def _overflowed_layers(u, caps):
    """Per-edge count of layers carrying more than their capacity.

    Usage fills layers bottom-up; any excess is spread one unit at a time
    over the layers that have capacity. With no capacity at all, every
    layer of the direction overflows as soon as anything crosses.
    """
    total = sum(caps)
    usable = sum(1 for c in caps if c > 0)
    excess = np.maximum(0, u - total)
    if usable == 0:
        return np.where(u > 0, len(caps), 0)
    return np.minimum(excess, usable)


class _Grid:
    """Edge usage. Path costs look at usage only, never at capacity."""

    def __init__(self, gx, gy, penalty):
        self.uh = np.zeros((gy, max(gx - 1, 0)), dtype=np.int64)
        self.uv = np.zeros((max(gy - 1, 0), gx), dtype=np.int64)
        self.a = penalty

    def _seg(self, seg):
        kind, fixed, a, b = seg
        lo, hi = (a, b) if a <= b else (b, a)
        if kind == "h":
            return self.uh[fixed, lo:hi]
        return self.uv[lo:hi, fixed]

    def cost(self, path):
        c = 0.0
        for seg in path:
            u = self._seg(seg)
            if len(u):
                c += len(u) + self.a * float(u.sum())
        return c

    def peak(self, path):
        return max((int(u.max()) for u in map(self._seg, path) if len(u)), default=0)

    def add(self, path, d):
        for seg in path:
            u = self._seg(seg)
            u += d


def _l_paths(x0, y0, x1, y1):
    if x0 == x1 or y0 == y1:
        return [[("h", y0, x0, x1), ("v", x1, y0, y1)]]
    return [[("h", y0, x0, x1), ("v", x1, y0, y1)], [("v", x0, y0, y1), ("h", y1, x0, x1)]]


def _z_paths(x0, y0, x1, y1):
    out = []
    step = 1 if x1 >= x0 else -1
    for xm in range(x0 + step, x1, step):
        out.append([("h", y0, x0, xm), ("v", xm, y0, y1), ("h", y1, xm, x1)])
    step = 1 if y1 >= y0 else -1
    for ym in range(y0 + step, y1, step):
        out.append([("v", x0, y0, ym), ("h", ym, x0, x1), ("v", x1, ym, y1)])
    return out


def route(p: Placement, tech: TechProfile, derates: dict[str, float] | None = None,
          cfg: RouteConfig = RouteConfig()) -> RouteResult:
    """Route every net of ``p.h`` as a driver-rooted star of two-pin connections.

    Each connection takes the less used L; one rip-up-and-reroute pass then
    revisits connections through the busiest edges, choosing among L and Z
    shapes. Routing choices ignore capacity, so the overflow count can only
    drop when capacity grows. Net length is the exact Manhattan pin distance
    summed over the star.
    """
    fp = p.fp
    gw = cfg.gcell_sites * fp.cpp_nm
    rows = cfg.gcell_rows or max(1, round(gw / fp.row_height_nm))
    gh = rows * fp.row_height_nm
    gx = max(1, math.ceil(fp.width_nm / gw))
    gy = max(1, math.ceil(fp.height_nm / gh))
    layers = layer_stack(tech, cfg.top_layer)
    caps = _layer_capacities(layers, gw, gh, derates, cfg.capacity_scale)
    caps_h = [c for ly, c in zip(layers, caps) if ly.horizontal]
    caps_v = [c for ly, c in zip(layers, caps) if not ly.horizontal]
    grid = _Grid(gx, gy, cfg.penalty)

    centers = p.centers()
    conns = []   # (net index, x0, y0, x1, y1)
    lengths = {}
    for ni, e in enumerate(p.h.edges):
        pts = [centers[q] for q in e.pins if q in centers]
        length = 0.0
        if len(pts) >= 2:
            (dx, dy) = pts[0]
            g0 = (min(gx - 1, int(dx // gw)), min(gy - 1, int(dy // gh)))
            for sx, sy in pts[1:]:
                length += abs(sx - dx) + abs(sy - dy)
                g1 = (min(gx - 1, int(sx // gw)), min(gy - 1, int(sy // gh)))
                if g1 != g0:
                    conns.append((ni, g0[0], g0[1], g1[0], g1[1]))
        lengths[e.id] = length

    order = sorted(range(len(conns)), key=lambda i: (abs(conns[i][1] - conns[i][3])
                                                      + abs(conns[i][2] - conns[i][4]), i))
    paths: list = [None] * len(conns)
    for i in order:
        _, x0, y0, x1, y1 = conns[i]
        cands = _l_paths(x0, y0, x1, y1)
        best = min(cands, key=grid.cost) if len(cands) > 1 else cands[0]
        grid.add(best, 1)
        paths[i] = best

    if cfg.reroute and conns:
        # revisit connections through the busiest edges, busiest first
        used = np.concatenate([grid.uh.ravel(), grid.uv.ravel()])
        used = used[used > 0]
        thresh = np.quantile(used, cfg.hot_quantile) if len(used) else 0
        hot = [(grid.peak(paths[i]), i) for i in range(len(conns))]
        hot = sorted((t for t in hot if t[0] > thresh), key=lambda t: (-t[0], t[1]))
        for _, i in hot:
            _, x0, y0, x1, y1 = conns[i]
            grid.add(paths[i], -1)
            cands = _l_paths(x0, y0, x1, y1) + _z_paths(x0, y0, x1, y1)
            costs = [grid.cost(c) for c in cands]
            best = cands[int(np.argmin(costs))]
            grid.add(best, 1)
            paths[i] = best

    ov_h = _overflowed_layers(grid.uh, caps_h) if caps_h else np.zeros_like(grid.uh)
    ov_v = _overflowed_layers(grid.uv, caps_v) if caps_v else np.zeros_like(grid.uv)
    count = int(ov_h.sum() + ov_v.sum())
    return RouteResult(lengths, grid.uh, grid.uv, layers, caps, count, (gw, gh),
                       _per_layer_overflow(grid, layers, caps))


def _per_layer_overflow(grid, layers, caps):
    out = {}
    for horizontal, u in ((True, grid.uh), (False, grid.uv)):
        lc = [(ly.name, c) for ly, c in zip(layers, caps) if ly.horizontal == horizontal]
        if not lc:
            continue
        usable = [n for n, c in lc if c > 0]
        excess = np.maximum(0, u - sum(c for _, c in lc))
        if not usable:
            for n, _ in lc:
                out[n] = int((u > 0).sum())
            continue
        for j, n in enumerate(usable):
            # round-robin: layer j receives a unit when excess > j
            out[n] = int((excess > j).sum())
        for n, c in lc:
            out.setdefault(n, 0)
    return out
