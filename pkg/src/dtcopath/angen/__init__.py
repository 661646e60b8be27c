"""Artificial netlists, the profile score, candidate sweeps and surrogate tuning."""

from .features import FEATURE_NAMES, feature_vector, write_features
from .generator import InfeasibleParams, generate_netlist
from .score import score, score_many
from .surrogate import (DATASET_HEADER, Surrogate, fit_surrogate, read_dataset, tune,
                        tune_table, write_dataset, write_tuning_report)
from .sweep import (DEFAULT_HALF_WIDTHS, DEFAULT_STEPS, TRAINING_VALUES, Bounds,
                    EmptyCandidateSet, ParamRanges, candidate_array, cross_product,
                    sweep_candidates, training_grid)

__all__ = [
    "FEATURE_NAMES", "feature_vector", "write_features", "InfeasibleParams",
    "generate_netlist", "score", "score_many", "DATASET_HEADER", "Surrogate",
    "fit_surrogate", "read_dataset", "tune", "tune_table", "write_dataset",
    "write_tuning_report", "DEFAULT_HALF_WIDTHS", "DEFAULT_STEPS", "TRAINING_VALUES",
    "Bounds", "EmptyCandidateSet", "ParamRanges", "candidate_array", "cross_product",
    "sweep_candidates", "training_grid",
]
