"""Nodal IR-drop analysis and effective-instance-voltage statistics."""

from .solver import (DEFAULT_ACTIVITY, VALID_EIV_FRACTION, CurrentLoads, IrResult, IrSolveError,
                     eiv_percentile, instance_currents, instance_power_mw, ir_valid, solve_ir)

__all__ = [
    "DEFAULT_ACTIVITY", "VALID_EIV_FRACTION", "CurrentLoads", "IrResult", "IrSolveError",
    "eiv_percentile", "instance_currents", "instance_power_mw", "ir_valid", "solve_ir",
]
