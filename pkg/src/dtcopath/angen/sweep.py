"""Candidate parameter grids around a target profile."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..netcore.topo import TopoParams

# half-widths and steps of the testing ranges, in parameter order
DEFAULT_HALF_WIDTHS = (500, 5, 0.2, 0.2, 10, 0.2)
DEFAULT_STEPS = (100, 1, 0.02, 0.02, 2, 0.02)

# values used to build the surrogate training set
TRAINING_VALUES = (
    (10000, 20000, 40000, 80000),
    (100, 200, 500, 1000, 2000, 4000),
    (1.8, 2.0, 2.2, 2.4, 2.6),
    (0.70, 0.75, 0.80, 0.85, 0.90, 0.95),
    (6, 8, 10, 12, 14, 16),
    (0.2, 0.4, 0.6, 0.8, 1.0),
)


class EmptyCandidateSet(ValueError):
    pass


@dataclass(frozen=True)
class Bounds:
    """Open/closed validity bounds applied to candidate inputs.

    Defaults keep generator inputs where it behaves: 0 < B <= 1, 0 < S <= 1,
    1 < D < 2.6 and T > 3. Instance and IO counts must be positive.
    """

    d_min: float = 1.0
    d_max: float = 2.6
    b_max: float = 1.0
    s_max: float = 1.0
    t_min: float = 3.0

    def mask(self, grid: np.ndarray) -> np.ndarray:
        n, p, d, b, t, s = grid.T
        return ((n > 0) & (p > 0) & (d > self.d_min) & (d < self.d_max)
                & (b > 0) & (b <= self.b_max) & (s > 0) & (s <= self.s_max)
                & (t > self.t_min))


@dataclass(frozen=True)
class ParamRanges:
    """Per-parameter (lo, hi, step) triples; grids include both ends."""

    ranges: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        if len(self.ranges) != 6:
            raise ValueError("need six (lo, hi, step) triples")
        for lo, hi, step in self.ranges:
            if lo > hi or step <= 0:
                raise ValueError(f"bad range ({lo}, {hi}, {step})")

    @classmethod
    def around(cls, target, half_widths=DEFAULT_HALF_WIDTHS, steps=DEFAULT_STEPS) -> ParamRanges:
        return cls(tuple((t - h, t + h, s) for t, h, s in zip(tuple(target), half_widths, steps)))

    def axes(self) -> list[np.ndarray]:
        out = []
        for lo, hi, step in self.ranges:
            n = math.floor((hi - lo) / step + 1e-9) + 1
            out.append(np.round(lo + step * np.arange(n), 10))
        return out

    @property
    def count(self) -> int:
        return math.prod(len(a) for a in self.axes())


def cross_product(axes) -> np.ndarray:
    """All combinations of the per-parameter value lists, first axis slowest."""
    axes = [np.asarray(a, dtype=float) for a in axes]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def candidate_array(target, ranges: ParamRanges, bounds: Bounds | None = Bounds()) -> np.ndarray:
    grid = cross_product(ranges.axes())
    if bounds is not None:
        grid = grid[bounds.mask(grid)]
    if len(grid) == 0:
        raise EmptyCandidateSet("no candidates survive the bound filters")
    return grid


def sweep_candidates(target: TopoParams, ranges: ParamRanges,
                     bounds: Bounds | None = Bounds()) -> list[TopoParams]:
    """Filtered cross-product of the per-parameter grids, in lexicographic order."""
    return [TopoParams.from_seq(row.tolist()) for row in candidate_array(target, ranges, bounds)]


def training_grid() -> np.ndarray:
    return cross_product(TRAINING_VALUES)
