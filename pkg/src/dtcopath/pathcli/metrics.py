"""PPAC metrics and the valid-run predicate."""

from __future__ import annotations

import math

from ..irsolve.solver import DEFAULT_ACTIVITY, VALID_EIV_FRACTION, instance_power_mw
from ..netcore.hypergraph import Hypergraph
from ..netcore.library import CellLibrary

WNS_LIMIT_NS = -0.050
DRC_LIMIT = 500


class MetricError(ValueError):
    pass


def fmax(clkp_ns: float, wns_ns: float) -> float:
    """Maximum frequency in GHz: 1 / (clkp - wns)."""
    period = clkp_ns - wns_ns
    if not period > 0:
        raise MetricError(f"effective period {period!r} ns is not positive")
    return 1.0 / period


def total_power(h: Hypergraph, lib: CellLibrary, f_ghz: float,
                activity: float = DEFAULT_ACTIVITY) -> float:
    """Leakage plus dynamic power of every non-IO instance, mW."""
    if f_ghz < 0:
        raise MetricError("frequency must be nonnegative")
    return math.fsum(instance_power_mw(lib[v.cell], f_ghz, activity)
                     for v in h.vertices if not v.is_io)


def edp(power_mw: float, fmax_ghz: float, literal: bool = False) -> float:
    """Energy-delay product in mW*ns^2, P / fmax^2.

    ``literal=True`` returns P * fmax^2 instead (mW*GHz^2); it grows with
    speed, so lower is no longer better.
    """
    if not fmax_ghz > 0:
        raise MetricError("fmax must be positive")
    if literal:
        return power_mw * fmax_ghz ** 2
    return power_mw / fmax_ghz ** 2


def valid(rec, vop: float | None = None) -> bool:
    """wns > -50 ps, DRC proxy < 500 and EIV p99.7 > 0.8 Vop, all strict.

    ``rec`` needs ``wns_ns``, ``drc_proxy`` and ``eiv_p997_v``; ``vop``
    defaults to the record's ``vop_v``.
    """
    vals = [getattr(rec, n, None) for n in ("wns_ns", "drc_proxy", "eiv_p997_v")]
    if vop is None:
        vop = getattr(rec, "vop_v", None)
    if any(v is None for v in vals) or vop is None:
        raise MetricError("record is missing timing, routing or IR outputs")
    wns, drc, eiv = vals
    return wns > WNS_LIMIT_NS and drc < DRC_LIMIT and eiv > VALID_EIV_FRACTION * vop
