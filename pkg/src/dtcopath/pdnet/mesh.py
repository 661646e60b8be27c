"""PDN geometry: stripes, rails, vias/TSVs and tap sites for the four PDN options."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..netcore.library import TechProfile
from ..physdes.floorplan import Floorplan
from .config import P_BB, P_BS, P_FB, P_FS, PdnConfig, StripeSpec
from .taps import VDD, VSS, TapCell, insert_tap_cells, rail_net

# via resistance per cut, ohm
V0_V3_OHM = 50.0
V4_V11_OHM = 5.0
V12_OHM = 0.06294
TSV_WIDTH_NM = 90.0
TSV_RESISTIVITY_OHM_M = 1.0e-7      # tungsten-like fill, size effects included
TSV_ASPECT = {P_FB: 7.0, P_BS: 10.0, P_BB: 10.0}
PG_PIN_WIDTH_NM = 36.0
JOG_WIDTH_NM = {P_FB: 36.0, P_BS: 90.0, P_BB: 90.0}

DEFAULT_SHEET_RES = {          # ohm / square
    **{f"M{i}": 4.3 for i in range(0, 4)},
    **{f"M{i}": 0.8 for i in range(4, 12)},
    "M12": 0.04, "M13": 0.04, "BM1": 0.04, "BM2": 0.04,
}
DEFAULT_RAIL_RES = {"M0": 120.0, "BPR": 30.0}    # ohm / um
METAL_PITCH_NM = {"M0": 24.0, "M1": 30.0, "M2": 24.0, "M3": 24.0,
                  **{f"M{i}": 64.0 for i in range(4, 12)},
                  "M12": 720.0, "M13": 720.0, "BM1": 720.0, "BM2": 720.0}


def tsv_resistance(kind: str, width_nm: float = TSV_WIDTH_NM,
                   resistivity: float = TSV_RESISTIVITY_OHM_M) -> float:
    """R = rho * h / A for a square nano-TSV of the kind's aspect ratio."""
    w = width_nm * 1e-9
    return resistivity * (w * TSV_ASPECT[kind]) / (w * w)


def is_vertical(layer: str) -> bool:
    """M3, M5, ... and BM1 run vertically; even layers and BM2 horizontally."""
    if layer.startswith("BM"):
        return layer == "BM1"
    return int(layer[1:]) % 2 == 1


def via_ohm(lower: str, upper: str) -> float:
    if lower.startswith("BM"):
        return V12_OHM
    lo = int(lower[1:])
    if lo <= 3:
        return V0_V3_OHM
    if lo <= 11:
        return V4_V11_OHM
    return V12_OHM


def via_count(lower: str, w_lower_nm: float, w_upper_nm: float) -> int:
    """Cuts in a crossing's via array at twice the lower metal's track pitch."""
    vp = 2.0 * METAL_PITCH_NM[lower]
    return max(1, int(w_lower_nm // vp)) * max(1, int(w_upper_nm // vp))


@dataclass(frozen=True)
class Line:
    """A stripe or rail: a straight conductor of one net."""

    key: str
    layer: str
    net: str
    vertical: bool
    coord_nm: float          # x of a vertical line, y of a horizontal one
    lo_nm: float
    hi_nm: float
    width_nm: float
    ohm_per_um: float

    def along(self, x: float, y: float) -> float:
        return y if self.vertical else x


@dataclass(frozen=True)
class Link:
    """A via, via stack or TSV between positions on two lines."""

    kind: str
    net: str
    a: str
    a_pos: float
    b: str
    b_pos: float
    ohm: float
    x_nm: float
    y_nm: float


@dataclass
class PdnMesh:
    cfg: PdnConfig
    fp: Floorplan
    lines: dict[str, Line]
    links: list[Link]
    taps: list[TapCell]
    pad_layer: str
    pads: list[tuple[str, float]] = field(default_factory=list)   # (line key, position)

    def stripes(self, layer: str | None = None) -> list[Line]:
        return [ln for ln in self.lines.values()
                if ln.layer not in ("M0", "BPR") and (layer is None or ln.layer == layer)]

    def rails(self) -> list[Line]:
        return [ln for ln in self.lines.values() if ln.layer in ("M0", "BPR")]

    def stripe_pairs(self, layer: str) -> int:
        return sum(1 for s in self.stripes(layer) if s.net == VDD)


def stripe_centers(extent_nm: float, spec: StripeSpec) -> list[tuple[str, float, float]]:
    """(net, center, width) of every stripe across ``extent_nm``.

    One VDD/VSS pair per pitch, ``max(1, floor(extent / pitch))`` pairs
    centered on the core; the two centerlines sit ``(width + spacing) / 2``
    either side of the pair center.
    """
    p, w, s = spec.pitch_um * 1e3, spec.width_um * 1e3, spec.spacing_um * 1e3
    n = max(1, int(math.floor(extent_nm / p + 1e-9)))
    first = (extent_nm - (n - 1) * p) / 2.0
    w = min(w, extent_nm)
    out = []
    for i in range(n):
        mid = first + i * p
        for net, c in ((VDD, mid - (w + s) / 2.0), (VSS, mid + (w + s) / 2.0)):
            out.append((net, min(max(c, w / 2.0), extent_nm - w / 2.0), w))
    return out


def _stack(cfg: PdnConfig) -> list[str]:
    if cfg.is_backside:
        return [l for l in ("BM1", "BM2") if l in cfg.stripes]
    return [l for l in (f"M{i}" for i in range(3, 14)) if l in cfg.stripes]


def build_pdn(cfg: PdnConfig, fp: Floorplan, tech: TechProfile | None = None,
              rail_res: dict[str, float] | None = None,
              sheet_res: dict[str, float] | None = None) -> PdnMesh:
    """Stripes, rails, vias/TSVs and taps of ``cfg`` on floorplan ``fp``."""
    rr = {**DEFAULT_RAIL_RES, **(rail_res or {})}
    sr = {**DEFAULT_SHEET_RES, **(sheet_res or {})}
    W, H = fp.width_nm, fp.height_nm
    lines: dict[str, Line] = {}
    links: list[Link] = []

    rail_layer = "BPR" if cfg.is_bpr else "M0"
    rails = []
    for b in range(fp.n_rows + 1):
        ln = Line(f"{rail_layer}:{b}", rail_layer, rail_net(b), False, b * fp.row_height_nm,
                  0.0, W, PG_PIN_WIDTH_NM, rr[rail_layer])
        lines[ln.key] = ln
        rails.append(ln)

    by_layer: dict[str, list[Line]] = {}
    for layer in _stack(cfg):
        spec = cfg.stripes[layer]
        vert = is_vertical(layer)
        extent, length = (W, H) if vert else (H, W)
        out = []
        for i, (net, c, w) in enumerate(stripe_centers(extent, spec)):
            ln = Line(f"{layer}:{i}", layer, net, vert, c, 0.0, length, w,
                      sr[layer] / (w * 1e-3))
            lines[ln.key] = ln
            out.append(ln)
        by_layer[layer] = out

    stack = _stack(cfg)
    for lower, upper in zip(stack, stack[1:]):
        r1 = via_ohm(lower, upper)
        for a in by_layer[lower]:
            for b in by_layer[upper]:
                if a.net != b.net or a.vertical == b.vertical:
                    continue
                x, y = (a.coord_nm, b.coord_nm) if a.vertical else (b.coord_nm, a.coord_nm)
                n = via_count(lower, a.width_nm, b.width_nm)
                links.append(Link(f"V{lower}-{upper}", a.net, a.key, a.along(x, y), b.key,
                                  b.along(x, y), r1 / n, x, y))

    taps: list[TapCell] = []
    if cfg.needs_taps:
        taps, _ = insert_tap_cells(fp, cfg.kind, cfg.tap_pitch_cpp, cfg.tap_scheme)

    bottom = by_layer[stack[0]] if stack else []
    if cfg.kind == P_FS:
        # every rail meets every same-net M3 stripe through V0-V2
        for rl in rails:
            for s in bottom:
                if s.net == rl.net:
                    links.append(Link("V0-V2", rl.net, rl.key, s.coord_nm, s.key,
                                      rl.coord_nm, 3 * V0_V3_OHM, s.coord_nm, rl.coord_nm))
    else:
        if cfg.kind == P_BB:
            step = cfg.bb_via_pitch_cpp
            points = [(rl, (k + 0.5) * fp.cpp_nm) for rl in rails
                      for k in range(step // 2, fp.sites_per_row, step)]
        else:
            points = [(rails[b], (t.site + t.width / 2.0) * fp.cpp_nm)
                      for t in taps for b in t.rails if b <= fp.n_rows]
        r_tsv = tsv_resistance(cfg.kind)
        extra = 2 * V0_V3_OHM if cfg.kind == P_FB else 0.0     # V1, V2 up to M3
        jog_layer = "M2" if cfg.kind == P_FB else stack[0]
        jog_w = JOG_WIDTH_NM[cfg.kind]
        for rl, x in points:
            cands = [s for s in bottom if s.net == rl.net]
            if not cands:
                continue
            s = min(cands, key=lambda s: (abs(s.coord_nm - x), s.coord_nm))
            jog = sr[jog_layer] * abs(s.coord_nm - x) / jog_w
            links.append(Link("TSV", rl.net, rl.key, x, s.key, rl.coord_nm,
                              r_tsv + extra + jog, x, rl.coord_nm))

    pad_layer = stack[-1] if stack else rail_layer
    pads = []
    if len(stack) >= 2:
        for ln in links:
            if ln.kind == f"V{stack[-2]}-{stack[-1]}":
                pads.append((ln.b, ln.b_pos))
    else:
        for s in by_layer.get(pad_layer, []):
            pads.append((s.key, s.lo_nm))
    return PdnMesh(cfg, fp, lines, links, taps, pad_layer, pads)


def routing_derate(cfg: PdnConfig, layer: str) -> float:
    """Fraction of a frontside routing layer's tracks taken by the PDN."""
    if cfg.derates and layer in cfg.derates:
        return float(cfg.derates[layer])
    if cfg.is_backside:
        return 0.0
    if layer in cfg.stripes:
        return float(cfg.stripes[layer].density)
    return 0.0


def routing_derates(cfg: PdnConfig, layers=("M0", "M1", "M2", "M3", "M4", "M5", "M6", "M7",
                                            "M8", "M9", "M10", "M11", "M12", "M13")) -> dict:
    return {l: routing_derate(cfg, l) for l in layers}
