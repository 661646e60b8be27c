"""Multiplicative ratio distance between two topological-parameter profiles."""

from __future__ import annotations

import numpy as np


def score(target, out) -> float:
    """Product over the six parameters of max(target/out, out/target).

    Equals 1 exactly when the two profiles coincide; larger is worse.
    """
    t = np.asarray(tuple(target), dtype=float)
    o = np.asarray(tuple(out), dtype=float)
    if t.shape != (6,) or o.shape != (6,):
        raise ValueError("score needs two six-parameter profiles")
    if np.any(t <= 0) or np.any(o <= 0) or not (np.all(np.isfinite(t)) and np.all(np.isfinite(o))):
        raise ValueError("score parameters must be finite and positive")
    r = t / o
    return float(np.prod(np.maximum(r, 1.0 / r)))


def score_many(target, outs: np.ndarray) -> np.ndarray:
    """Vectorized score of one target against an (M, 6) array of profiles.

    Rows with a nonpositive entry score ``inf``.
    """
    t = np.asarray(tuple(target), dtype=float)
    o = np.asarray(outs, dtype=float)
    bad = np.any(o <= 0, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = t / np.where(o <= 0, 1.0, o)
        s = np.prod(np.maximum(r, 1.0 / r), axis=1)
    s[bad] = np.inf
    return s
