"""Cell library and technology description.

Cells are modeled abstractly: a width in CPP, pin names, and a handful of
delay/power coefficients. Four presets ship with the package (``lib1`` ..
``lib4``), covering the (Fin, RT, PGpin, CH) combinations used for
pathfinding studies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

PRESETS = ("lib1", "lib2", "lib3", "lib4")


class LibraryError(ValueError):
    """Malformed or inconsistent library document."""


@dataclass(frozen=True)
class CellSpec:
    name: str
    width_cpp: int
    is_sequential: bool = False
    intrinsic_delay_ps: float = 0.0
    load_delay_ps_per_fanout: float = 0.0
    leakage_mw: float = 0.0
    dyn_energy_mw_per_ghz: float = 0.0
    inputs: tuple[str, ...] = ("A",)
    output: str = "Y"
    clock: str | None = None
    extra_outputs: tuple[str, ...] = ()  # clustered cells drive several nets

    def __post_init__(self):
        if self.width_cpp < 1:
            raise LibraryError(f"cell {self.name}: width must be >= 1 CPP")
        for attr in ("intrinsic_delay_ps", "load_delay_ps_per_fanout",
                     "leakage_mw", "dyn_energy_mw_per_ghz"):
            if getattr(self, attr) < 0:
                raise LibraryError(f"cell {self.name}: {attr} must be >= 0")
        if self.is_sequential and self.clock is None:
            raise LibraryError(f"sequential cell {self.name} needs a clock pin")

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    @property
    def input_pins(self) -> tuple[str, ...]:
        """All sink pins, the clock included."""
        return self.inputs + ((self.clock,) if self.clock else ())

    @property
    def output_pins(self) -> tuple[str, ...]:
        return (self.output,) + self.extra_outputs


@dataclass(frozen=True)
class TechProfile:
    """Technology constants. Pitches in nm.

    The cell height in M0 tracks is tied to the routing-track count and the
    power-pin style: ``rt + 2`` with M0 power pins, ``rt + 1`` with buried
    power rails.
    """

    cpp_nm: float = 45.0
    m0p_nm: float = 24.0
    m1p_nm: float = 30.0
    m2p_nm: float = 24.0
    fin: int = 2
    rt: int = 4
    pg_pin: str = "M0"
    ch_tracks: int | None = None
    vop_v: float = 0.7
    wire_ps_per_um: float = 1.5
    name: str = ""

    def __post_init__(self):
        if self.pg_pin not in ("M0", "BPR"):
            raise LibraryError(f"pgpin must be M0 or BPR, got {self.pg_pin!r}")
        if self.fin not in (2, 3):
            raise LibraryError(f"fin must be 2 or 3, got {self.fin}")
        if self.rt not in (4, 5):
            raise LibraryError(f"rt must be 4 or 5, got {self.rt}")
        expected = self.rt + (2 if self.pg_pin == "M0" else 1)
        if self.ch_tracks is None:
            object.__setattr__(self, "ch_tracks", expected)
        elif self.ch_tracks != expected:
            raise LibraryError(
                f"ch={self.ch_tracks} inconsistent with rt={self.rt}, "
                f"pgpin={self.pg_pin} (must be {expected})")
        for attr in ("cpp_nm", "m0p_nm", "m1p_nm", "m2p_nm", "vop_v"):
            if getattr(self, attr) <= 0:
                raise LibraryError(f"{attr} must be positive")

    @property
    def row_height_nm(self) -> float:
        return self.ch_tracks * self.m0p_nm

    @property
    def is_bpr(self) -> bool:
        return self.pg_pin == "BPR"


@dataclass(frozen=True)
class CellLibrary:
    name: str
    cells: dict[str, CellSpec] = field(default_factory=dict)

    def __getitem__(self, name: str) -> CellSpec:
        return self.cells[name]

    def __contains__(self, name) -> bool:
        return name in self.cells

    def __iter__(self):
        return iter(self.cells.values())

    def __len__(self):
        return len(self.cells)

    def combinational(self) -> list[CellSpec]:
        return [c for c in self.cells.values() if not c.is_sequential]

    def sequential(self) -> list[CellSpec]:
        return [c for c in self.cells.values() if c.is_sequential]

    @property
    def max_comb_width(self) -> int:
        return max((c.width_cpp for c in self.combinational()), default=0)


def _kv(tokens, lineno):
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise LibraryError(f"line {lineno}: expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        out[k.lower()] = v
    return out


def load_library(text: str) -> tuple[CellLibrary, TechProfile]:
    """Parse a library document: one ``tech`` line followed by ``cell`` lines."""
    tech = None
    cells: dict[str, CellSpec] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "tech":
            if tech is not None:
                raise LibraryError(f"line {lineno}: duplicate tech line")
            kv = _kv(rest, lineno)
            try:
                tech = TechProfile(
                    cpp_nm=float(kv.pop("cpp", 45)),
                    m0p_nm=float(kv.pop("m0p", 24)),
                    m1p_nm=float(kv.pop("m1p", 30)),
                    m2p_nm=float(kv.pop("m2p", 24)),
                    fin=int(kv.pop("fin", 2)),
                    rt=int(kv.pop("rt", 4)),
                    pg_pin=kv.pop("pgpin", "M0").upper(),
                    ch_tracks=int(kv["ch"]) if "ch" in kv else None,
                    vop_v=float(kv.pop("vop", 0.7)),
                    wire_ps_per_um=float(kv.pop("wire", 1.5)),
                    name=kv.pop("name", ""),
                )
            except LibraryError as exc:
                raise LibraryError(f"line {lineno}: {exc}") from None
            kv.pop("ch", None)
            if kv:
                raise LibraryError(f"line {lineno}: unknown tech keys {sorted(kv)}")
        elif head == "cell":
            if tech is None:
                raise LibraryError(f"line {lineno}: cell before tech line")
            if not rest:
                raise LibraryError(f"line {lineno}: cell needs a name")
            name, kv = rest[0], _kv(rest[1:], lineno)
            if name in cells:
                raise LibraryError(f"line {lineno}: duplicate cell {name}")
            try:
                cells[name] = CellSpec(
                    name=name,
                    width_cpp=int(kv["width"]),
                    is_sequential=kv.get("seq", "0") not in ("0", "false"),
                    intrinsic_delay_ps=float(kv.get("d0", 0)),
                    load_delay_ps_per_fanout=float(kv.get("d1", 0)),
                    leakage_mw=float(kv.get("leak", 0)),
                    dyn_energy_mw_per_ghz=float(kv.get("edyn", 0)),
                    inputs=tuple(kv.get("ins", "A").split(",")),
                    output=kv.get("out", "Y").split(",")[0],
                    extra_outputs=tuple(kv.get("out", "Y").split(",")[1:]),
                    clock=kv.get("clk"),
                )
            except KeyError:
                raise LibraryError(f"line {lineno}: cell {name} missing width") from None
            except LibraryError as exc:
                raise LibraryError(f"line {lineno}: {exc}") from None
        else:
            raise LibraryError(f"line {lineno}: unknown statement {head!r}")
    if tech is None:
        raise LibraryError("library has no tech line")
    return CellLibrary(tech.name or "custom", cells), tech


def dump_library(lib: CellLibrary, tech: TechProfile) -> str:
    lines = [
        f"tech name={lib.name} cpp={tech.cpp_nm:g} m0p={tech.m0p_nm:g} "
        f"m1p={tech.m1p_nm:g} m2p={tech.m2p_nm:g} fin={tech.fin} rt={tech.rt} "
        f"pgpin={tech.pg_pin} ch={tech.ch_tracks} vop={tech.vop_v:g} "
        f"wire={tech.wire_ps_per_um:g}"
    ]
    for c in lib:
        tok = [f"cell {c.name}", f"width={c.width_cpp}", f"seq={int(c.is_sequential)}",
               f"ins={','.join(c.inputs)}", f"out={','.join(c.output_pins)}"]
        if c.clock:
            tok.append(f"clk={c.clock}")
        tok += [f"d0={c.intrinsic_delay_ps:g}", f"d1={c.load_delay_ps_per_fanout:g}",
                f"leak={c.leakage_mw:g}", f"edyn={c.dyn_energy_mw_per_ghz:g}"]
        lines.append(" ".join(tok))
    return "\n".join(lines) + "\n"


def preset(name: str) -> tuple[CellLibrary, TechProfile]:
    """Load one of the bundled libraries by name (``lib1`` .. ``lib4``)."""
    key = name.lower()
    if key not in PRESETS:
        raise LibraryError(f"unknown preset {name!r}; choose from {PRESETS}")
    text = resources.files("dtcopath.netcore").joinpath("data", f"{key}.lib").read_text()
    return load_library(text)


def resolve_library(spec: str) -> tuple[CellLibrary, TechProfile]:
    """Preset name or path to a library file."""
    if spec.lower() in PRESETS:
        return preset(spec)
    return load_library(Path(spec).read_text())
