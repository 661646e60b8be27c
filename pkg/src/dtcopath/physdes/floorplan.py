"""Row/site floorplans with reserved (keepout) sites."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np


class FloorplanError(ValueError):
    pass


@dataclass(frozen=True)
class Floorplan:
    """A core of ``n_rows`` rows, each ``sites_per_row`` CPP-wide sites."""

    n_rows: int
    sites_per_row: int
    cpp_nm: float = 45.0
    row_height_nm: float = 144.0
    keepouts: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n_rows < 2:
            raise FloorplanError("a floorplan needs at least 2 rows")
        if self.sites_per_row < 1:
            raise FloorplanError("a floorplan needs at least 1 site per row")
        for r, s in self.keepouts:
            if not (0 <= r < self.n_rows and 0 <= s < self.sites_per_row):
                raise FloorplanError(f"keepout ({r}, {s}) outside the core")

    @property
    def width_nm(self) -> float:
        return self.sites_per_row * self.cpp_nm

    @property
    def height_nm(self) -> float:
        return self.n_rows * self.row_height_nm

    @property
    def area_um2(self) -> float:
        return self.width_nm * self.height_nm * 1e-6

    @property
    def n_sites(self) -> int:
        return self.n_rows * self.sites_per_row

    @property
    def n_free_sites(self) -> int:
        return self.n_sites - len(self.keepouts)

    def with_keepouts(self, sites) -> Floorplan:
        return replace(self, keepouts=frozenset(self.keepouts) | frozenset(sites))

    def free_mask(self) -> np.ndarray:
        m = np.ones((self.n_rows, self.sites_per_row), dtype=bool)
        for r, s in self.keepouts:
            m[r, s] = False
        return m

    def slots(self, span: int) -> np.ndarray:
        """Left-to-right greedy slot grid: ``(row, site)`` of every span-wide free run."""
        free = self.free_mask()
        pad = np.zeros((self.n_rows, 1), dtype=bool)
        edges = np.diff(np.hstack([pad, free, pad]).astype(np.int8), axis=1)
        out = []
        for r in range(self.n_rows):
            starts = np.flatnonzero(edges[r] == 1)
            ends = np.flatnonzero(edges[r] == -1)
            for a, b in zip(starts, ends):
                n = (b - a) // span
                if n:
                    out.extend((r, a + i * span) for i in range(n))
        return np.array(out, dtype=int).reshape(-1, 2)

    @classmethod
    def for_cells(cls, n_objects: int, span: int, util: float, cpp_nm: float,
                  row_height_nm: float, aspect: float = 1.0, keepout_fn=None) -> Floorplan:
        """Smallest near-square floorplan placing ``n_objects`` at ``util``.

        ``util`` is measured against free sites. ``keepout_fn(fp)`` returns the
        reserved sites of a candidate floorplan (tap cells, for instance);
        the core widens until both the utilization and the slot count work.
        """
        if not 0 < util <= 1:
            raise FloorplanError("util must be in (0, 1]")
        need = n_objects * span / util
        r0 = max(2, round(math.sqrt(need * cpp_nm / (row_height_nm * aspect))))
        # among near-square shapes, waste the fewest sites
        # even row counts keep double-height tap rows whole
        rows = min(range(max(2, int(0.8 * r0)) // 2 * 2, int(1.25 * r0) + 3, 2),
                   key=lambda r: (r * max(span, math.ceil(need / r)) - need, abs(r - r0)))
        sites = max(span, math.ceil(need / rows))
        while True:
            fp = cls(rows, sites, cpp_nm, row_height_nm)
            if keepout_fn is not None:
                fp = fp.with_keepouts(keepout_fn(fp))
            n_slots = len(fp.slots(span))
            if fp.n_free_sites >= need - 1e-9 and n_slots >= n_objects:
                return fp
            grow = max(need / max(fp.n_free_sites, 1), n_objects / max(n_slots, 1))
            sites = max(sites + 1, math.ceil(sites * grow))
