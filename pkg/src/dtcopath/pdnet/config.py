"""PDN configuration: kinds, stripe tables, tap settings and the keyed text format."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

P_FS, P_FB, P_BS, P_BB = "P_FS", "P_FB", "P_BS", "P_BB"
KINDS = (P_FS, P_FB, P_BS, P_BB)
SHORT_KINDS = {"fs": P_FS, "fb": P_FB, "bs": P_BS, "bb": P_BB}
TAP_KINDS = (P_FB, P_BS)
BACKSIDE_KINDS = (P_BS, P_BB)
BPR_KINDS = (P_FB, P_BB)
TAP_PITCHES = (24, 32, 48, 96, 128)
COLUMN, STAGGERED = "Column", "Staggered"
SCHEMES = (COLUMN, STAGGERED)
TAP_WIDTH_CPP = {P_FB: 2, P_BS: 6}


class PdnConfigError(ValueError):
    pass


@dataclass(frozen=True)
class StripeSpec:
    pitch_um: float
    width_um: float
    spacing_um: float
    density: float      # fraction of routing tracks taken


FRONT_STRIPES = {
    "M3": StripeSpec(1.08, 0.012, 0.508, 0.04),
    "M4": StripeSpec(1.152, 0.032, 0.544, 0.11),
    **{f"M{i}": StripeSpec(5.0, 1.0, 1.5, 0.20) for i in range(5, 12)},
    "M12": StripeSpec(4.32, 1.8, 0.36, 1.00),
    "M13": StripeSpec(4.32, 1.8, 0.36, 1.00),
}
BACK_STRIPES = {
    "BM1": StripeSpec(4.32, 1.8, 0.36, 1.00),
    "BM2": StripeSpec(4.32, 1.8, 0.36, 1.00),
}


def default_stripes(kind: str) -> dict[str, StripeSpec]:
    return dict(BACK_STRIPES if kind in BACKSIDE_KINDS else FRONT_STRIPES)


def _norm_kind(kind: str) -> str:
    k = str(kind)
    if k.lower() in SHORT_KINDS:
        return SHORT_KINDS[k.lower()]
    for full in KINDS:
        if k.upper() == full.upper():
            return full
    raise PdnConfigError(f"unknown PDN kind {kind!r}")


def _norm_scheme(s):
    for full in SCHEMES:
        if str(s).lower() == full.lower():
            return full
    raise PdnConfigError(f"unknown tap scheme {s!r}")


@dataclass(frozen=True)
class PdnConfig:
    """One PDN option. Tap settings are required exactly for P_FB and P_BS."""

    kind: str = P_FS
    tap_pitch_cpp: int | None = None
    tap_scheme: str | None = None
    stripes: dict = field(default=None)
    bb_via_pitch_cpp: int = 24
    derates: dict | None = None      # per-layer overrides

    def __post_init__(self):
        object.__setattr__(self, "kind", _norm_kind(self.kind))
        if self.tap_scheme is not None:
            object.__setattr__(self, "tap_scheme", _norm_scheme(self.tap_scheme))
        has_tap = self.tap_pitch_cpp is not None or self.tap_scheme is not None
        if self.kind in TAP_KINDS:
            if self.tap_pitch_cpp is None or self.tap_scheme is None:
                raise PdnConfigError(f"{self.kind} needs tap_pitch and tap_scheme")
            if int(self.tap_pitch_cpp) not in TAP_PITCHES:
                raise PdnConfigError(f"tap pitch must be one of {TAP_PITCHES}")
            object.__setattr__(self, "tap_pitch_cpp", int(self.tap_pitch_cpp))
        elif has_tap:
            raise PdnConfigError(f"{self.kind} takes no tap cells")
        if self.stripes is None:
            object.__setattr__(self, "stripes", default_stripes(self.kind))
        if self.bb_via_pitch_cpp < 1:
            raise PdnConfigError("bb_via_pitch must be positive")

    @property
    def needs_taps(self) -> bool:
        return self.kind in TAP_KINDS

    @property
    def is_backside(self) -> bool:
        return self.kind in BACKSIDE_KINDS

    @property
    def is_bpr(self) -> bool:
        return self.kind in BPR_KINDS

    @property
    def tap_width_cpp(self) -> int:
        return TAP_WIDTH_CPP.get(self.kind, 0)

    @property
    def label(self) -> str:
        if self.needs_taps:
            return f"{self.kind}-{self.tap_pitch_cpp}-{self.tap_scheme}"
        return self.kind

    def with_stripe(self, layer: str, spec: StripeSpec) -> PdnConfig:
        s = dict(self.stripes)
        s[layer] = spec
        return replace(self, stripes=s)


def parse_pdn_config(text: str) -> PdnConfig:
    """Parse ``pdn kind=P_BS tap_pitch=48 tap_scheme=Staggered`` plus optional
    ``stripe LAYER pitch=.. width=.. spacing=.. density=..`` and
    ``derate LAYER=value ...`` lines."""
    kw: dict = {}
    overrides: dict[str, dict] = {}
    derates: dict[str, float] = {}
    seen_pdn = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        pairs = {}
        for tok in rest:
            if "=" not in tok:
                if head == "stripe" and "layer" not in pairs:
                    pairs["layer"] = tok
                    continue
                raise PdnConfigError(f"line {lineno}: expected key=value, got {tok!r}")
            k, v = tok.split("=", 1)
            pairs[k.lower()] = v
        try:
            if head == "pdn":
                seen_pdn = True
                for k, v in pairs.items():
                    if k == "kind":
                        kw["kind"] = v
                    elif k == "tap_pitch":
                        kw["tap_pitch_cpp"] = int(v)
                    elif k == "tap_scheme":
                        kw["tap_scheme"] = v
                    elif k == "bb_via_pitch":
                        kw["bb_via_pitch_cpp"] = int(v)
                    else:
                        raise PdnConfigError(f"line {lineno}: unknown pdn key {k!r}")
            elif head == "stripe":
                layer = pairs.pop("layer", None)
                if layer is None:
                    raise PdnConfigError(f"line {lineno}: stripe needs a layer")
                overrides[layer] = {k: float(v) for k, v in pairs.items()}
            elif head == "derate":
                derates.update({k.upper(): float(v) for k, v in pairs.items()})
            else:
                raise PdnConfigError(f"line {lineno}: unknown directive {head!r}")
        except ValueError as exc:
            if isinstance(exc, PdnConfigError):
                raise
            raise PdnConfigError(f"line {lineno}: {exc}") from None
    if not seen_pdn:
        raise PdnConfigError("missing 'pdn' line")
    cfg = PdnConfig(**kw, derates=derates or None)
    for layer, o in overrides.items():
        base = cfg.stripes.get(layer, StripeSpec(1.0, 0.1, 0.1, 0.0))
        cfg = cfg.with_stripe(layer, StripeSpec(o.get("pitch", base.pitch_um),
                                                o.get("width", base.width_um),
                                                o.get("spacing", base.spacing_um),
                                                o.get("density", base.density)))
    return cfg


def format_pdn_config(cfg: PdnConfig) -> str:
    parts = [f"pdn kind={cfg.kind}"]
    if cfg.needs_taps:
        parts.append(f"tap_pitch={cfg.tap_pitch_cpp} tap_scheme={cfg.tap_scheme}")
    if cfg.kind == P_BB:
        parts.append(f"bb_via_pitch={cfg.bb_via_pitch_cpp}")
    lines = [" ".join(parts)]
    for layer, s in cfg.stripes.items():
        lines.append(f"stripe {layer} pitch={s.pitch_um:g} width={s.width_um:g} "
                     f"spacing={s.spacing_um:g} density={s.density:g}")
    if cfg.derates:
        lines.append("derate " + " ".join(f"{k}={v:g}" for k, v in sorted(cfg.derates.items())))
    return "\n".join(lines) + "\n"
