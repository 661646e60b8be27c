"""One grid point of the flow: regularize, place, route, time, build the PDN, solve IR."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from ..cwreg.cluster import ClusterMap, cwr_fc_cluster
from ..irsolve.solver import DEFAULT_ACTIVITY, eiv_percentile, instance_currents, solve_ir
from ..netcore.hypergraph import Hypergraph
from ..netcore.library import CellLibrary, TechProfile
from ..netcore.topo import total_width, width_regularize_naive
from ..pdnet.config import PdnConfig
from ..pdnet.extract import extract_resistive_network
from ..pdnet.mesh import build_pdn
from ..physdes.floorplan import Floorplan
from ..physdes.kth import kth_on_placement, pdn_derates, tap_keepout_fn
from ..physdes.place import place
from ..physdes.route import RouteConfig, route
from ..physdes.sta import sta
from .metrics import MetricError, edp, fmax, total_power, valid
from .records import RunRecord


@dataclass
class Regularized:
    """A width-regularized netlist and the owner of every original vertex."""

    h: Hypergraph
    cmap: dict[str, str]
    span: int
    label: str


def regularize(h: Hypergraph, lib: CellLibrary, how: str = "clustered",
               span: int | None = None) -> Regularized:
    """Clustered (CWR-FC) or naive (inflate to the widest cell) regularization.

    ``span`` defaults to the widest combinational cell, widened to fit the
    widest sequential cell so that every placed object fits one slot.
    """
    widest = max((h.widths[v.id] for v in h.vertices if not v.is_io), default=1)
    span = span or max(lib.max_comb_width, widest)
    if how == "clustered":
        hc, cm = cwr_fc_cluster(h, span)
        return Regularized(hc, dict(cm.cmap), span, how)
    if how == "naive":
        return Regularized(width_regularize_naive(h, lib), {v.id: v.id for v in h.vertices},
                           span, how)
    raise ValueError(f"unknown regularization {how!r}")


def identity_map(h: Hypergraph) -> ClusterMap:
    cm = ClusterMap()
    for v in h.vertices:
        cm.cmap[v.id] = v.id
        cm.members[v.id] = (v.id,)
        cm.widths[v.id] = h.widths[v.id]
    return cm


def pdn_fields(pdn: PdnConfig | None) -> dict:
    pdn = pdn or PdnConfig()
    return {"pdn": pdn.kind, "i_pitch": pdn.tap_pitch_cpp, "i_scheme": pdn.tap_scheme}


def floorplan_for(reg: Regularized, tech: TechProfile, util: float, pdn) -> Floorplan:
    return Floorplan.for_cells(reg.h.n_inst, reg.span, util, tech.cpp_nm, tech.row_height_nm,
                               keepout_fn=tap_keepout_fn(pdn))


def ir_analysis(h: Hypergraph, lib: CellLibrary, tech: TechProfile, pdn: PdnConfig, p,
                cmap: dict[str, str], f_ghz: float, activity: float = DEFAULT_ACTIVITY):
    """Per-instance IR result for the original netlist ``h``.

    Currents of the original instances are lumped onto the placed object
    that owns them; each instance then sees its owner's drop.
    """
    mesh = build_pdn(pdn, p.fp, tech)
    net = extract_resistive_network(mesh, p)
    loads = instance_currents(h, lib, f_ghz, activity, tech.vop_v)
    res = solve_ir(net, loads.aggregate(cmap), tech.vop_v)
    owner = {v.id: cmap[v.id] for v in h.vertices if not v.is_io}
    return res.expand(owner), mesh, net


def run_point(h: Hypergraph, lib: CellLibrary, tech: TechProfile, pdn: PdnConfig | None,
              util: float, clkp: float, seed: int = 0, *, design: str = "design",
              library: str | None = None, regularization: str = "clustered",
              activity: float = DEFAULT_ACTIVITY, reg: Regularized | None = None,
              route_cfg: RouteConfig = RouteConfig()) -> RunRecord:
    """Full PPAC run of one grid point. Errors propagate; ``run_sweep`` captures them."""
    pdn = pdn or PdnConfig()
    reg = reg or regularize(h, lib, regularization)
    rec = RunRecord(design, library or tech.name, util=util, clkp_ns=clkp, seed=seed,
                    regularization=reg.label, mode="ppac", **pdn_fields(pdn))
    fp = floorplan_for(reg, tech, util, pdn)
    p = place(reg.h, fp, reg.span, seed=seed)
    r = route(p, tech, pdn_derates(pdn), route_cfg)
    t = sta(h, lib, r.net_length_nm, clkp, tech.wire_ps_per_um)
    f_clk = 1.0 / clkp
    ir, _, _ = ir_analysis(h, lib, tech, pdn, p, reg.cmap, f_clk, activity)
    power = total_power(h, lib, f_clk, activity)
    try:
        f = fmax(clkp, t.wns_ns)
        e = edp(power, f)
    except MetricError:
        f = e = None
    rec = replace(rec, **feature_fields(reg.h, h), wirelength=r.wirelength_nm * 1e-3,
                  area_um2=fp.area_um2, achieved_util=total_width(h) / fp.n_free_sites,
                  drc_proxy=r.drc_proxy, wns_ns=t.wns_ns, tns_ns=t.tns_ns,
                  failing_endpoints=t.failing_endpoints, total_power_mw=power,
                  fmax_ghz=f, edp=e, eiv_p997_v=eiv_percentile(ir),
                  worst_vdrop_mv=ir.worst_vdrop_v * 1e3, vop_v=tech.vop_v)
    return replace(rec, valid=valid(rec))


def feature_fields(placed: Hypergraph, original: Hypergraph) -> dict:
    n_edges = len(placed.edges)
    return {
        "n_inst": placed.n_inst,
        "n_nets": n_edges,
        "n_prim": sum(1 for v in original.vertices if v.is_io),
        "avg_fanout": sum(len(e) - 1 for e in placed.edges) / n_edges if n_edges else 0.0,
        "n_seq": sum(1 for v in original.vertices if v.is_seq),
    }


def kth_point(h: Hypergraph, lib: CellLibrary, tech: TechProfile, pdn: PdnConfig | None,
              util: float, seed: int = 0, *, design: str = "design", library: str | None = None,
              regularization: str = "clustered", reg: Regularized | None = None,
              refine: int = 0, route_cfg: RouteConfig = RouteConfig()) -> RunRecord:
    """Kth of one grid point, with the untangled route's figures as features."""
    pdn = pdn or PdnConfig()
    reg = reg or regularize(h, lib, regularization)
    fp = floorplan_for(reg, tech, util, pdn)
    p = place(reg.h, fp, reg.span, seed=seed)
    derates = pdn_derates(pdn)
    r0 = route(p, tech, derates, route_cfg)
    res = kth_on_placement(p, tech, derates, seed, route_cfg=route_cfg, refine=refine)
    return RunRecord(design, library or tech.name, util=util, clkp_ns=None, seed=seed,
                     regularization=reg.label, mode="kth", **pdn_fields(pdn),
                     **feature_fields(reg.h, h), wirelength=r0.wirelength_nm * 1e-3,
                     area_um2=fp.area_um2, achieved_util=total_width(h) / fp.n_free_sites,
                     drc_proxy=r0.drc_proxy, kth=float(res.kth))


def is_sentinel(kth: float | None) -> bool:
    return kth is not None and math.isinf(kth)
