"""Routability by progressive tangling (Kth) and achievable utilization."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

from ..netcore.hypergraph import Hypergraph
from ..netcore.library import TechProfile
from .floorplan import Floorplan
from .place import Placement, place
from .route import RouteConfig, route
from .tangle import Tangler

DRC_THRESHOLD = 500
DEFAULT_K_GRID = tuple(range(1, 65))
UTIL_GRID = tuple(round(0.70 + 0.02 * i, 2) for i in range(13))
CLKP_GRID = tuple(round(0.12 + 0.02 * i, 2) for i in range(7))


@dataclass
class KthResult:
    """Kth is ``math.inf`` when routing never failed up to ``k_max``."""

    kth: float
    k_max: float
    trace: list[tuple[float, int, float]] = field(default_factory=list)   # k, overflow, wl nm
    threshold: int = DRC_THRESHOLD

    @property
    def failed(self) -> bool:
        return math.isfinite(self.kth)

    @property
    def label(self) -> str:
        if self.failed:
            return f"{self.kth:g}"
        return f">{self.k_max:g}"

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["k", "overflow", "wirelength"])
            for k, ov, wl in self.trace:
                w.writerow([repr(float(k)), ov, repr(float(wl))])


def tap_keepout_fn(pdn):
    """Keepout callback for Floorplan.for_cells, or None when the PDN has no taps."""
    if pdn is None or not pdn.needs_taps:
        return None
    from ..pdnet.taps import insert_tap_cells

    def fn(fp):
        return insert_tap_cells(fp, pdn.kind, pdn.tap_pitch_cpp, pdn.tap_scheme)[1]
    return fn


def pdn_derates(pdn) -> dict[str, float] | None:
    if pdn is None:
        return None
    from ..pdnet.mesh import routing_derates
    return routing_derates(pdn)


def kth_on_placement(p: Placement, tech: TechProfile, derates=None, seed: int = 0,
                     drc_threshold: int = DRC_THRESHOLD, k_grid=DEFAULT_K_GRID,
                     route_cfg: RouteConfig = RouteConfig(), refine: int = 0) -> KthResult:
    """Walk ``k_grid`` along one cumulative swap stream, routing at each step.

    Kth is the first k whose overflow count exceeds ``drc_threshold``.
    ``refine`` bisection steps then narrow Kth between the last passing
    and first failing checkpoints (the stream is prefix-consistent, so a
    fresh tangler replays the same swaps).
    """
    ks = [float(k) for k in k_grid]
    if not ks or any(b <= a for a, b in zip(ks, ks[1:])):
        raise ValueError("k_grid must be a nonempty increasing sequence")
    n = p.n_obj
    tg = Tangler(p, seed)
    trace = []
    prev_pass = 0.0
    for k in ks:
        tg.advance_to(round(k * n))
        r = route(tg.placement(), tech, derates, route_cfg)
        trace.append((k, r.drc_proxy, r.wirelength_nm))
        if r.drc_proxy > drc_threshold:
            hi = k
            lo = prev_pass
            for _ in range(refine):
                mid = 0.5 * (lo + hi)
                if round(mid * n) in (round(lo * n), round(hi * n)):
                    break
                t2 = Tangler(p, seed)
                t2.advance_to(round(mid * n))
                r2 = route(t2.placement(), tech, derates, route_cfg)
                trace.append((mid, r2.drc_proxy, r2.wirelength_nm))
                if r2.drc_proxy > drc_threshold:
                    hi = mid
                else:
                    lo = mid
            trace.sort(key=lambda t: t[0])
            return KthResult(hi, ks[-1], trace, drc_threshold)
        prev_pass = k
    return KthResult(math.inf, ks[-1], trace, drc_threshold)


def kth(h: Hypergraph, tech: TechProfile, util: float = 0.9, pdn=None, seed: int = 0,
        drc_threshold: int = DRC_THRESHOLD, k_grid=DEFAULT_K_GRID, span: int | None = None,
        fp: Floorplan | None = None, route_cfg: RouteConfig = RouteConfig(),
        refine: int = 0) -> KthResult:
    """Place a width-regularized netlist once, then find its Kth.

    ``span`` defaults to the widest placed object. A PDN with tap cells
    reserves their sites; its stripe densities derate the router.
    """
    widths = [h.widths[v.id] for v in h.vertices if not v.is_io]
    span = span or max(widths)
    if any(w > span for w in widths):
        raise ValueError("netlist is not width-regularized to the span")
    if fp is None:
        fp = Floorplan.for_cells(len(widths), span, util, tech.cpp_nm, tech.row_height_nm,
                                 keepout_fn=tap_keepout_fn(pdn))
    elif pdn is not None and pdn.needs_taps:
        fp = fp.with_keepouts(tap_keepout_fn(pdn)(fp))
    p = place(h, fp, span, seed=seed)
    return kth_on_placement(p, tech, pdn_derates(pdn), seed, drc_threshold, k_grid,
                            route_cfg, refine)


NONE_VALID = None


def achievable_utilization(h: Hypergraph, lib, tech: TechProfile, pdn=None,
                           util_grid=UTIL_GRID, clkp_grid=CLKP_GRID, validity=None,
                           runner=None, seed: int = 0):
    """Largest utilization with at least one valid run over ``clkp_grid``.

    ``runner(h, lib, tech, pdn, util, clkp, seed)`` returns a run record;
    by default the full place/route/timing/IR pipeline. ``validity(rec)``
    defaults to the record's own verdict. Returns None when no run is valid.
    """
    if not util_grid or not clkp_grid:
        raise ValueError("grids must be nonempty")
    if runner is None:
        from ..pathcli.pipeline import run_point

        def runner(h, lib, tech, pdn, util, clkp, seed):
            return run_point(h, lib, tech, pdn, util, clkp, seed=seed)
    if validity is None:
        def validity(rec):
            return bool(getattr(rec, "valid", False))
    for util in sorted(util_grid, reverse=True):
        for clkp in clkp_grid:
            if validity(runner(h, lib, tech, pdn, util, clkp, seed)):
                return float(util)
    return NONE_VALID
