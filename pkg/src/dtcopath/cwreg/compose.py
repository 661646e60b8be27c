"""Physical composition of clustered cells and the derived cell library."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..netcore.hypergraph import Hypergraph
from ..netcore.library import CellLibrary, CellSpec, TechProfile

MEMBER, PADDING, WHITESPACE = "member", "padding", "whitespace"


class CompositionError(ValueError):
    """Members plus forced padding do not fit in w_max."""


@dataclass(frozen=True)
class Slot:
    kind: str
    width: int
    name: str = ""


@dataclass(frozen=True)
class ClusteredCellLayout:
    cluster_id: str
    slots: tuple[Slot, ...]

    @property
    def width(self) -> int:
        return sum(s.width for s in self.slots)

    def offsets(self) -> dict[str, int]:
        """Left edge of each member, in CPP from the cell origin."""
        out, x = {}, 0
        for s in self.slots:
            if s.kind == MEMBER:
                out[s.name] = x
            x += s.width
        return out


def site_alignment(tech: TechProfile) -> int:
    """Member offsets must be multiples of this many CPP to keep M1 pins on track."""
    cpp, m1p = round(tech.cpp_nm), round(tech.m1p_nm)
    return m1p // math.gcd(cpp, m1p)


def compose_clustered_cell(members, tech: TechProfile, w_max: int,
                           cluster_id: str = "") -> ClusteredCellLayout:
    """Lay out ``members`` (``(name, width)`` pairs) left to right in a w_max-wide cell.

    Every member starts on an aligned site, so a member ending off-grid is
    followed by padding. Slack is handed out in alignment units, round
    robin over gaps: junctions without padding first, then the left and
    right ends, then padded junctions. An odd unit remainder goes to the
    right end, where it shifts no member.
    """
    members = [(str(n), int(w)) for n, w in members]
    if not members:
        raise CompositionError("empty cluster")
    a = site_alignment(tech)
    pads = []
    x = 0
    for i, (_, w) in enumerate(members):
        x += w
        if i < len(members) - 1:
            p = (-x) % a
            pads.append(p)
            x += p
    slack = w_max - x
    if slack < 0:
        raise CompositionError(f"cluster {cluster_id or members}: needs {x} CPP > w_max={w_max}")
    junctions = len(members) - 1
    # gap ids: 0 = left end, 1..j = junctions, j+1 = right end
    gaps = ([g + 1 for g in range(junctions) if pads[g] == 0] + [0, junctions + 1]
            + [g + 1 for g in range(junctions) if pads[g] > 0])
    extra = [0] * (junctions + 2)
    units, rem = divmod(slack, a)
    for u in range(units):
        extra[gaps[u % len(gaps)]] += a
    extra[junctions + 1] += rem

    slots = []
    if extra[0]:
        slots.append(Slot(WHITESPACE, extra[0]))
    for i, (name, w) in enumerate(members):
        slots.append(Slot(MEMBER, w, name))
        if i < junctions:
            if pads[i]:
                slots.append(Slot(PADDING, pads[i]))
            if extra[i + 1]:
                slots.append(Slot(WHITESPACE, extra[i + 1]))
    if extra[-1]:
        slots.append(Slot(WHITESPACE, extra[-1]))
    return ClusteredCellLayout(cluster_id, tuple(slots))


def compose_all(h: Hypergraph, cm, tech: TechProfile, w_max: int) -> dict[str, ClusteredCellLayout]:
    """Layouts of every combinational cluster, keyed by cluster id."""
    out = {}
    for cid, mem in cm.members.items():
        if h.vertex(mem[0]).is_comb:
            out[cid] = compose_clustered_cell([(v, h.widths[v]) for v in mem], tech, w_max, cid)
    return out


def clustered_library(h: Hypergraph, cm, lib: CellLibrary, w_max: int) -> CellLibrary:
    """Library with one merged cell per distinct member-cell sequence.

    Merged cells are w_max wide; their pins are the member pins suffixed
    with the member's slot index, their power is the member sum and their
    delay coefficients the member maximum.
    """
    cells = dict(lib.cells)
    for mem in cm.members.values():
        if len(mem) < 2:
            continue
        specs = [lib[h.vertex(v).cell] for v in mem]
        name = "_".join(s.name for s in specs)
        if name in cells:
            continue
        ins = tuple(f"{p}_{i}" for i, s in enumerate(specs) for p in s.inputs)
        outs = tuple(f"{s.output}_{i}" for i, s in enumerate(specs))
        cells[name] = CellSpec(
            name=name, width_cpp=w_max, is_sequential=False,
            intrinsic_delay_ps=max(s.intrinsic_delay_ps for s in specs),
            load_delay_ps_per_fanout=max(s.load_delay_ps_per_fanout for s in specs),
            leakage_mw=sum(s.leakage_mw for s in specs),
            dyn_energy_mw_per_ghz=sum(s.dyn_energy_mw_per_ghz for s in specs),
            inputs=ins, output=outs[0], extra_outputs=outs[1:])
    return CellLibrary(f"{lib.name}_clustered", cells)
