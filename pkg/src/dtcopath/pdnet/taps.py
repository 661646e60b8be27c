"""Double-height power tap cells: Column and Staggered insertion."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..physdes.floorplan import Floorplan
from .config import COLUMN, P_BS, TAP_WIDTH_CPP, _norm_kind, _norm_scheme

TSV_KEEPOUT_NM = 50.0
VDD, VSS = "VDD", "VSS"


class TapError(ValueError):
    pass


def rail_net(boundary: int) -> str:
    """Net of the power rail on row boundary ``boundary`` (row 0 sits on VSS)."""
    return VSS if boundary % 2 == 0 else VDD


@dataclass(frozen=True)
class TapCell:
    row: int            # bottom row of the double-height cell
    site: int
    width: int

    @property
    def rails(self) -> tuple[int, int, int]:
        return (self.row, self.row + 1, self.row + 2)

    @property
    def flavor(self) -> str:
        return "-".join(rail_net(b) for b in self.rails)

    def sites(self):
        return {(r, s) for r in (self.row, self.row + 1)
                for s in range(self.site, self.site + self.width)}


def tap_rows(n_rows: int, scheme: str) -> list[tuple[int, int]]:
    """(bottom row, parity) of every tap row pair."""
    _norm_scheme(scheme)
    return [(r, i % 2) for i, r in enumerate(range(0, n_rows - 1, 2))]


def row_pattern(scheme: str, pitch: int, parity: int) -> tuple[int, int]:
    """(first site, step) of the taps on one row pair.

    Column repeats the same tap columns on every row pair. Staggered is a
    checkerboard: each tap column holds a tap every fourth row, and
    neighbouring columns are shifted by two rows, so every rail is still
    tapped while the tap count halves.
    """
    if _norm_scheme(scheme) == COLUMN:
        return 0, pitch
    return (pitch if parity else 0), 2 * pitch


def taps_per_row(sites_per_row: int, step: int, width: int, offset: int = 0) -> int:
    if offset + width > sites_per_row:
        return 0
    return (sites_per_row - width - offset) // step + 1


def keepout_sites_per_side(cpp_nm: float, kind: str) -> int:
    return math.ceil(TSV_KEEPOUT_NM / cpp_nm - 1e-9) if _norm_kind(kind) == P_BS else 0


def insert_tap_cells(fp: Floorplan, kind: str, pitch_cpp: int, scheme: str):
    """Tap cells and the sites they reserve.

    Column puts a row of taps every ``pitch`` sites on every row pair.
    Staggered gives each tap column a tap every fourth row, alternating
    columns between the two row-pair phases. P_BS taps also reserve a
    whole-site keepout ring around the nano-TSV on both sides.
    Returns ``(taps, keepouts)``.
    """
    kind = _norm_kind(kind)
    if kind not in TAP_WIDTH_CPP:
        raise TapError(f"{kind} takes no tap cells")
    w = TAP_WIDTH_CPP[kind]
    pitch = int(pitch_cpp)
    if pitch < w:
        raise TapError(f"tap pitch {pitch} is narrower than the {w}CPP tap")
    ring = keepout_sites_per_side(fp.cpp_nm, kind)
    taps = []
    for row, parity in tap_rows(fp.n_rows, scheme):
        first, step = row_pattern(scheme, pitch, parity)
        for s in range(first, fp.sites_per_row - w + 1, step):
            taps.append(TapCell(row, s, w))
    if not taps:
        raise TapError(f"a {fp.n_rows}x{fp.sites_per_row} floorplan fits no {w}CPP tap")
    keep = set()
    for t in taps:
        for r in (t.row, t.row + 1):
            for s in range(max(0, t.site - ring), min(fp.sites_per_row, t.site + w + ring)):
                keep.add((r, s))
    return taps, frozenset(keep)


def expected_tap_count(n_rows: int, sites_per_row: int, pitch: int, width: int, scheme: str) -> int:
    """Closed-form tap count, for checking ``insert_tap_cells``."""
    pairs = n_rows // 2
    if _norm_scheme(scheme) == COLUMN:
        return pairs * taps_per_row(sites_per_row, pitch, width)
    even = (pairs + 1) // 2
    return (even * taps_per_row(sites_per_row, 2 * pitch, width)
            + (pairs - even) * taps_per_row(sites_per_row, 2 * pitch, width, pitch))
