"""PPAC metrics, the pipeline per grid point, sweeps, reports and the CLI."""

from .config import (DESK_DESIGN, DESK_PARAMS, ConfigError, DesignSpec, ExperimentConfig,
                     load_config, make_pdn, parse_config)
from .metrics import DRC_LIMIT, WNS_LIMIT_NS, MetricError, edp, fmax, total_power, valid
from .pipeline import Regularized, ir_analysis, kth_point, regularize, run_point
from .records import HEADER, RunRecord, from_row, read_records, to_row, write_records
from .reports import TRADEOFFS, ReportBundle, emit_reports, pareto_mask
from .sweep import run_sweep

__all__ = [
    "DESK_DESIGN", "DESK_PARAMS", "ConfigError", "DesignSpec", "ExperimentConfig",
    "load_config", "make_pdn", "parse_config", "DRC_LIMIT", "WNS_LIMIT_NS", "MetricError",
    "edp", "fmax", "total_power", "valid", "Regularized", "ir_analysis", "kth_point",
    "regularize", "run_point", "HEADER", "RunRecord", "from_row", "read_records", "to_row",
    "write_records", "TRADEOFFS", "ReportBundle", "emit_reports", "pareto_mask", "run_sweep",
]
