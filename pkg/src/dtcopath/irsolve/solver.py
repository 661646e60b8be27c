"""Static IR-drop solve of a PDN resistive network under instance current loads."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
import pyamg
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import cg

from ..netcore.hypergraph import Hypergraph
from ..netcore.library import CellLibrary
from ..pdnet.extract import NetGraph, ResistiveNetwork
from ..pdnet.taps import VDD, VSS

DEFAULT_ACTIVITY = 0.2
VALID_EIV_FRACTION = 0.8


class IrSolveError(RuntimeError):
    pass


@dataclass
class CurrentLoads:
    """Current drawn per instance, mA."""

    currents_ma: dict[str, float]

    def __post_init__(self):
        for v, i in self.currents_ma.items():
            if not i >= 0:
                raise ValueError(f"negative or undefined current at {v}")

    @property
    def total_ma(self) -> float:
        return math.fsum(self.currents_ma.values())

    def aggregate(self, owner: dict[str, str]) -> CurrentLoads:
        """Sum loads onto their owners (cluster of each instance, say)."""
        out: dict[str, float] = {}
        for v, i in self.currents_ma.items():
            k = owner.get(v, v)
            out[k] = out.get(k, 0.0) + i
        return CurrentLoads(out)

    def scaled(self, factor: float) -> CurrentLoads:
        return CurrentLoads({k: v * factor for k, v in self.currents_ma.items()})

    def __add__(self, other: CurrentLoads) -> CurrentLoads:
        out = dict(self.currents_ma)
        for k, v in other.currents_ma.items():
            out[k] = out.get(k, 0.0) + v
        return CurrentLoads(out)


def instance_power_mw(spec, f_ghz: float, activity: float) -> float:
    return spec.leakage_mw + spec.dyn_energy_mw_per_ghz * f_ghz * activity


def instance_currents(h: Hypergraph, lib: CellLibrary, f_ghz: float,
                      activity: float = DEFAULT_ACTIVITY, vop_v: float = 0.7) -> CurrentLoads:
    """I = (leakage + edyn * f * activity) / Vop for every non-IO instance."""
    if f_ghz < 0:
        raise ValueError("frequency must be nonnegative")
    if not 0 < activity <= 1:
        raise ValueError("activity must lie in (0, 1]")
    return CurrentLoads({v.id: instance_power_mw(lib[v.cell], f_ghz, activity) / vop_v
                         for v in h.vertices if not v.is_io})


@dataclass
class IrResult:
    vop_v: float
    vdrop_v: dict[str, float]
    node_drop: dict[str, np.ndarray] = field(default_factory=dict)   # VDD droop / VSS bounce
    kcl_residual: float = 0.0        # max nodal imbalance over total load current
    iterations: int = 0

    @property
    def eiv_v(self) -> dict[str, float]:
        return {k: self.vop_v - d for k, d in self.vdrop_v.items()}

    @property
    def worst_vdrop_v(self) -> float:
        return max(self.vdrop_v.values(), default=0.0)

    def node_voltages(self, net: str) -> np.ndarray:
        d = self.node_drop[net]
        return self.vop_v - d if net == VDD else d

    def expand(self, owner: dict[str, str]) -> IrResult:
        """Per-instance result for instances that share an owner's attachment."""
        vd = {v: self.vdrop_v[o] for v, o in owner.items() if o in self.vdrop_v}
        return IrResult(self.vop_v, vd, self.node_drop, self.kcl_residual, self.iterations)

    def write_csv(self, path, q: float = 0.997) -> None:
        p = eiv_percentile(self, q)
        ok = ir_valid(p, self.vop_v)
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["instance", "vdrop_mV", "eiv_V"])
            for k in sorted(self.vdrop_v):
                d = self.vdrop_v[k]
                w.writerow([k, repr(d * 1e3), repr(self.vop_v - d)])
            f.write(f"# eiv_p997={p!r} vop={self.vop_v!r} {'pass' if ok else 'fail'}\n")


def _solve_spd(A, b, rtol, maxiter):
    """CG with an algebraic-multigrid preconditioner, then residual refinement."""
    n = A.shape[0]
    if n == 0:
        return np.zeros(0), 0
    nb = float(np.linalg.norm(b))
    if nb == 0.0:
        return np.zeros(n), 0
    # pyamg draws its spectral-radius start vector from the global numpy RNG;
    # pin it so repeated solves are bit-identical, then hand the state back
    state = np.random.get_state()
    np.random.seed(0)
    try:
        M = pyamg.smoothed_aggregation_solver(A, symmetry="symmetric", max_coarse=500).aspreconditioner()
    except Exception:   # pragma: no cover - tiny or odd matrices
        M = None
    finally:
        np.random.set_state(state)
    x = np.zeros(n)
    its = 0
    for _ in range(4):
        r = b - A @ x
        if np.linalg.norm(r) <= rtol * nb:
            return x, its
        count = [0]

        def cb(_xk):
            count[0] += 1

        dx, info = cg(A, r, rtol=rtol, atol=0.0, maxiter=maxiter, M=M, callback=cb)
        its += count[0]
        if info < 0:
            raise IrSolveError(f"conjugate gradients broke down (info={info})")
        x = x + dx
    r = b - A @ x
    if np.linalg.norm(r) > 10 * rtol * nb:
        raise IrSolveError(f"no convergence in {maxiter} iterations "
                           f"(relative residual {np.linalg.norm(r) / nb:.2e})")
    return x, its


def _solve_net(ng: NetGraph, inj: np.ndarray, rtol, maxiter):
    L = ng.laplacian()
    n = ng.n
    is_pad = np.zeros(n, dtype=bool)
    is_pad[ng.pads] = True
    # nodes in components without a pad carry no current; leave them at zero
    _, comp = connected_components(L, directed=False)
    live = np.isin(comp, np.unique(comp[ng.pads])) & ~is_pad
    stray = ~live & ~is_pad & (inj != 0)
    if stray.any():
        raise IrSolveError(f"{ng.net}: current injected into a node with no path to a pad")
    idx = np.flatnonzero(live)
    A = L[idx][:, idx].tocsr()
    d = np.zeros(n)
    x, its = _solve_spd(A, inj[idx], rtol, maxiter)
    d[idx] = x
    resid = np.abs(A @ x - inj[idx]).max() if len(idx) else 0.0
    return d, float(resid), its


def solve_ir(net: ResistiveNetwork, loads: CurrentLoads, vop: float,
             rtol: float = 1e-10, maxiter: int = 2000) -> IrResult:
    """Solve both supply nets with pads held ideal and sum droop and bounce.

    Loads attach to the network's instance nodes (mA). Per instance,
    V_drop = (Vop - V_vdd) + V_vss.
    """
    vd = {}
    drops = {}
    resid, its, total = 0.0, 0, 0.0
    unknown = set(loads.currents_ma) - set(net.nets[VDD].attach)
    if unknown:
        raise IrSolveError(f"loads on instances missing from the network: {sorted(unknown)[:5]}")
    for name in (VDD, VSS):
        ng = net.nets[name]
        inj = np.zeros(ng.n)
        for v, node in ng.attach.items():
            inj[node] += loads.currents_ma.get(v, 0.0) * 1e-3
        total = max(total, float(inj.sum()))
        d, r, k = _solve_net(ng, inj, rtol, maxiter)
        drops[name] = d
        resid = max(resid, r)
        its += k
    for v in net.nets[VDD].attach:
        vd[v] = float(drops[VDD][net.nets[VDD].attach[v]] + drops[VSS][net.nets[VSS].attach[v]])
    return IrResult(vop, vd, drops, resid / total if total > 0 else 0.0, its)


def eiv_percentile(res: IrResult, q: float = 0.997) -> float:
    """Low-tail EIV statistic: nearest rank ``ceil((1 - q) N)`` of the ascending EIVs."""
    vals = np.sort(np.fromiter(res.eiv_v.values(), dtype=float))
    if len(vals) == 0:
        raise ValueError("no instances in the IR result")
    k = max(1, math.ceil((1.0 - q) * len(vals) - 1e-9))
    return float(vals[min(k, len(vals)) - 1])


def ir_valid(eiv_p997: float, vop: float) -> bool:
    return eiv_p997 > VALID_EIV_FRACTION * vop
