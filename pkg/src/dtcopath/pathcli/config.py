"""Experiment configuration: grids over designs, libraries, PDNs, util, clkp and seeds.

Keyed-text format, one statement per line::

    design aes2k n_inst=2000 n_prim=50 d_avg=3.0 b_avg=0.5 t_avg=8 s_ratio=0.1 seed=1
    design mine file=mine.net
    lib lib2
    pdn fs
    pdn fb pitch=48 scheme=column
    util 0.70 0.80 0.90
    clkp 0.16 0.20 0.24
    seed 0
    regularization clustered
    mode ppac
    activity 0.2
    workers 1
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path

from ..netcore.library import PRESETS, LibraryError, resolve_library
from ..netcore.topo import PARAM_NAMES, TopoParams
from ..pdnet.config import SHORT_KINDS, PdnConfig, PdnConfigError

MODES = ("ppac", "kth")
DESK_PARAMS = TopoParams(2000, 50, 3.0, 0.5, 5, 0.1)
REGULARIZATIONS = ("clustered", "naive")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DesignSpec:
    """A generated design (``params``) or a netlist file (``path``)."""

    name: str
    params: TopoParams | None = None
    path: str | None = None
    gen_seed: int = 0

    def __post_init__(self):
        if (self.params is None) == (self.path is None):
            raise ConfigError(f"design {self.name}: give either generator parameters or file=")

    def load(self, lib):
        if self.path is not None:
            from ..netcore.formats import parse_netlist
            return parse_netlist(Path(self.path).read_text(), lib)
        from ..angen.generator import generate_netlist
        return generate_netlist(self.params, lib, seed=self.gen_seed)


DESK_DESIGN = DesignSpec("desk2k", DESK_PARAMS, gen_seed=1)


def parse_design(name: str, kv: dict[str, str]) -> DesignSpec:
    kv = dict(kv)
    if "file" in kv:
        path = kv.pop("file")
        if kv:
            raise ConfigError(f"design {name}: unexpected keys {sorted(kv)}")
        return DesignSpec(name, path=path)
    try:
        seed = int(kv.pop("seed", 0))
    except ValueError:
        raise ConfigError(f"design {name}: seed must be an integer") from None
    missing = [p for p in PARAM_NAMES if p not in kv]
    if missing:
        raise ConfigError(f"design {name}: missing {', '.join(missing)}")
    extra = set(kv) - set(PARAM_NAMES)
    if extra:
        raise ConfigError(f"design {name}: unexpected keys {sorted(extra)}")
    try:
        params = TopoParams(**{p: float(kv[p]) for p in PARAM_NAMES})
    except ValueError as e:
        raise ConfigError(f"design {name}: {e}") from None
    return DesignSpec(name, params=params, gen_seed=seed)


def make_pdn(kind: str, pitch=None, scheme=None) -> PdnConfig:
    k = SHORT_KINDS.get(str(kind).lower(), kind)
    try:
        return PdnConfig(k, None if pitch is None else int(pitch), scheme)
    except (PdnConfigError, ValueError) as e:
        raise ConfigError(str(e)) from None


@dataclass(frozen=True)
class ExperimentConfig:
    designs: tuple[DesignSpec, ...]
    libraries: tuple[str, ...] = ("lib2",)
    pdns: tuple[PdnConfig, ...] = (PdnConfig(),)
    utils: tuple[float, ...] = (0.9,)
    clkps: tuple[float, ...] = (0.2,)
    seeds: tuple[int, ...] = (0,)
    regularizations: tuple[str, ...] = ("clustered",)
    mode: str = "ppac"
    activity: float = 0.2
    workers: int = 1
    refine: int = 0

    def __post_init__(self):
        for name in ("designs", "libraries", "pdns", "utils", "seeds", "regularizations"):
            if not getattr(self, name):
                raise ConfigError(f"{name} grid is empty")
        if self.mode == "ppac" and not self.clkps:
            raise ConfigError("clkps grid is empty")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        for r in self.regularizations:
            if r not in REGULARIZATIONS:
                raise ConfigError(f"regularization must be one of {REGULARIZATIONS}")
        for u in self.utils:
            if not 0 < u <= 1:
                raise ConfigError(f"util {u} outside (0, 1]")
        for c in self.clkps:
            if not c > 0:
                raise ConfigError(f"clkp {c} must be positive")
        if not 0 < self.activity <= 1:
            raise ConfigError("activity must lie in (0, 1]")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        names = [d.name for d in self.designs]
        if len(set(names)) != len(names):
            raise ConfigError("design names must be unique")
        for lib in self.libraries:
            if lib.lower() not in PRESETS and not Path(lib).is_file():
                raise ConfigError(f"library {lib!r} is neither a preset nor a file")

    def points(self):
        """Grid points in persistence order."""
        clkps = self.clkps if self.mode == "ppac" else (None,)
        return list(itertools.product(self.designs, self.libraries, self.regularizations,
                                      self.pdns, self.utils, clkps, self.seeds))

    def __len__(self):
        return len(self.points())


def _kv(tokens, lineno):
    out = {}
    for t in tokens:
        if "=" not in t:
            raise ConfigError(f"line {lineno}: expected key=value, got {t!r}")
        k, v = t.split("=", 1)
        out[k.lower()] = v
    return out


def _floats(tokens, lineno):
    try:
        return tuple(float(t) for t in tokens)
    except ValueError:
        raise ConfigError(f"line {lineno}: expected numbers") from None


def parse_config(text: str) -> ExperimentConfig:
    kw: dict = {}
    designs, pdns = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        key, rest = toks[0].lower(), toks[1:]
        if key == "design":
            if not rest:
                raise ConfigError(f"line {lineno}: design needs a name")
            designs.append(parse_design(rest[0], _kv(rest[1:], lineno)))
        elif key == "pdn":
            if not rest:
                raise ConfigError(f"line {lineno}: pdn needs a kind")
            kv = _kv(rest[1:], lineno)
            pitch, scheme = kv.pop("pitch", None), kv.pop("scheme", None)
            if kv:
                raise ConfigError(f"line {lineno}: unexpected pdn keys {sorted(kv)}")
            pdns.append(make_pdn(rest[0], pitch, scheme))
        elif key in ("lib", "libs", "library"):
            kw["libraries"] = tuple(rest)
        elif key == "util":
            kw["utils"] = _floats(rest, lineno)
        elif key == "clkp":
            kw["clkps"] = _floats(rest, lineno)
        elif key in ("seed", "seeds"):
            try:
                kw["seeds"] = tuple(int(t) for t in rest)
            except ValueError:
                raise ConfigError(f"line {lineno}: seeds must be integers") from None
        elif key == "regularization":
            kw["regularizations"] = tuple(t.lower() for t in rest)
        elif key == "mode" and len(rest) == 1:
            kw["mode"] = rest[0].lower()
        elif key in ("activity", "workers", "refine") and len(rest) == 1:
            try:
                kw[key] = float(rest[0]) if key == "activity" else int(rest[0])
            except ValueError:
                raise ConfigError(f"line {lineno}: bad {key} value {rest[0]!r}") from None
        else:
            raise ConfigError(f"line {lineno}: unknown statement {raw.strip()!r}")
    if pdns:
        kw["pdns"] = tuple(pdns)
    return ExperimentConfig(tuple(designs), **kw)


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}") from None
    return parse_config(text)


def resolve_lib(spec: str):
    try:
        return resolve_library(spec)
    except (LibraryError, OSError) as e:
        raise ConfigError(str(e)) from None
