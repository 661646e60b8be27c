"""Fixed-order feature vectors of implementation runs for external clustering."""

from __future__ import annotations

import csv

import numpy as np

FEATURE_NAMES = ("n_inst", "n_nets", "n_prim", "avg_fanout", "n_seq", "wirelength",
                 "area_um2", "drc_proxy", "wns_ns", "tns_ns", "failing_endpoints")


def feature_vector(run) -> np.ndarray:
    """Feature vector of a completed run, in FEATURE_NAMES order.

    ``run`` is anything with those attributes (normally a RunRecord). Failed
    routes are still emitted; their DRC-proxy count is just large.
    """
    missing = [n for n in FEATURE_NAMES if getattr(run, n, None) is None]
    if missing:
        raise ValueError(f"run lacks {', '.join(missing)}")
    return np.array([float(getattr(run, n)) for n in FEATURE_NAMES])


def write_features(path, runs) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(FEATURE_NAMES)
        for r in runs:
            w.writerow([repr(v) for v in feature_vector(r).tolist()])
