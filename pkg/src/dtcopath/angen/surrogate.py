"""Input-to-output parameter surrogates and score-driven tuning."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from ..netcore.topo import TopoParams
from .score import score_many
from .sweep import Bounds, ParamRanges, candidate_array

DATASET_HEADER = [f"in{i}" for i in range(1, 7)] + [f"out{i}" for i in range(1, 7)]


def _as_pairs(data):
    xs, ys = [], []
    for x, y in data:
        xs.append([float(v) for v in x])
        ys.append([float(v) for v in y])
    x, y = np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)
    if x.ndim != 2 or x.shape[1] != 6 or y.shape != x.shape:
        raise ValueError("training pairs must be six-parameter profiles")
    return x, y


@dataclass(frozen=True, eq=False)
class Surrogate:
    kind: str
    k: int
    x: np.ndarray
    y: np.ndarray
    mu: np.ndarray
    sd: np.ndarray
    beta: np.ndarray | None = None  # (7, 6) on normalized inputs, intercept last
    _tree: cKDTree | None = field(default=None, repr=False)

    @property
    def coef_(self) -> np.ndarray:
        """Linear coefficients in raw input units, shape (7, 6), intercept last."""
        if self.beta is None:
            raise AttributeError("only linear surrogates have coefficients")
        w = self.beta[:6] / self.sd[:, None]
        b = self.beta[6] - (self.mu / self.sd) @ self.beta[:6]
        return np.vstack([w, b])

    def predict(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        z = (x - self.mu) / self.sd
        if self.kind == "linear":
            return np.hstack([z, np.ones((len(z), 1))]) @ self.beta
        k = min(self.k, len(self.x))
        dist, idx = self._tree.query(z, k=k)
        dist = dist.reshape(len(z), k)
        idx = idx.reshape(len(z), k)
        exact = dist <= 1e-12
        w = np.where(exact.any(axis=1, keepdims=True), exact.astype(float), 1.0 / np.maximum(dist, 1e-12))
        w /= w.sum(axis=1, keepdims=True)
        return np.einsum("ij,ijk->ik", w, self.y[idx])

    def predict_one(self, params) -> TopoParams:
        return TopoParams.from_seq(self.predict(tuple(params))[0].tolist())


def fit_surrogate(data, kind: str = "knn", k: int = 5) -> Surrogate:
    """Fit on (input, output) profile pairs.

    Inputs are z-normalized per dimension; a zero-variance dimension is left
    unscaled. ``knn`` averages the k nearest outputs with inverse-distance
    weights, ``linear`` is a per-output least-squares fit with intercept.
    """
    x, y = _as_pairs(data)
    if kind not in ("knn", "linear"):
        raise ValueError(f"unknown surrogate kind {kind!r}")
    if kind == "knn" and (k < 1 or len(x) < k):
        raise ValueError(f"knn with k={k} needs at least k training pairs")
    if kind == "linear" and len(x) < 7:
        raise ValueError("linear surrogate needs at least 7 training pairs")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("training data must be finite")
    mu, sd = x.mean(axis=0), x.std(axis=0)
    flat = sd <= 1e-12 * np.maximum(1.0, np.abs(mu))
    mu = np.where(flat, 0.0, mu)
    sd = np.where(flat, 1.0, sd)
    z = (x - mu) / sd
    if kind == "linear":
        a = np.hstack([z, np.ones((len(z), 1))])
        beta, *_ = np.linalg.lstsq(a, y, rcond=None)
        return Surrogate(kind, 0, x, y, mu, sd, beta=beta)
    return Surrogate(kind, k, x, y, mu, sd, _tree=cKDTree(z))


def tune_table(target, model: Surrogate, ranges: ParamRanges,
               bounds: Bounds | None = Bounds()) -> tuple[np.ndarray, np.ndarray]:
    """Candidates (lexicographic order) and their predicted scores."""
    cands = candidate_array(target, ranges, bounds)
    return cands, score_many(target, model.predict(cands))


def tune(target, model: Surrogate, ranges: ParamRanges,
         bounds: Bounds | None = Bounds()) -> tuple[TopoParams, float]:
    """Candidate with the lowest predicted score; ties go to the lexicographically smallest."""
    cands, scores = tune_table(target, model, ranges, bounds)
    # scores equal up to float noise are ties; the first one is lexicographically smallest
    lo = scores.min()
    i = int(np.flatnonzero(scores <= lo + 1e-12 * abs(lo))[0])
    return TopoParams.from_seq(cands[i].tolist()), float(scores[i])


def write_tuning_report(path, cands, scores) -> None:
    order = np.lexsort((np.arange(len(scores)), scores))
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["candidate", "predicted_score"])
        for i in order:
            w.writerow([" ".join(repr(float(v)) for v in cands[i]), repr(float(scores[i]))])


def write_dataset(path, pairs) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(DATASET_HEADER)
        for x, y in pairs:
            w.writerow([repr(float(v)) for v in tuple(x) + tuple(y)])


def read_dataset(path) -> list[tuple[TopoParams, TopoParams]]:
    with open(path, newline="") as f:
        r = csv.reader(f)
        header = next(r)
        if header != DATASET_HEADER:
            raise ValueError(f"{path}: expected header {','.join(DATASET_HEADER)}")
        out = []
        for row in r:
            vals = [float(v) for v in row]
            out.append((TopoParams.from_seq(vals[:6]), TopoParams.from_seq(vals[6:])))
    return out
