"""Line-based structural netlist format.

::

    # comment
    input a
    output y
    cell INV_X1 u1
    net n1 a u1.A
    net n2 u1.Y y weight=2

The first terminal of a ``net`` statement is its driver. Statements may also
be separated by ``;``, and ``<CellName> <inst>`` is accepted as shorthand
for ``cell <CellName> <inst>``.
"""

from __future__ import annotations

from .hypergraph import (COMBINATIONAL, PRIMARY_IO, SEQUENTIAL, Hyperedge,
                         Hypergraph, NetlistError, Vertex)
from .library import CellLibrary


class NetlistSyntaxError(NetlistError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _statements(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        for stmt in line.split(";"):
            toks = stmt.split()
            if toks:
                yield lineno, toks


def parse_netlist(text: str, lib: CellLibrary) -> Hypergraph:
    vertices: dict[str, Vertex] = {}
    widths: dict[str, int] = {}
    edges: list[Hyperedge] = []

    def add_vertex(lineno, v, w):
        if v.id in vertices:
            raise NetlistSyntaxError(lineno, f"duplicate instance {v.id}")
        vertices[v.id] = v
        widths[v.id] = w

    pending = []
    for lineno, toks in _statements(text):
        head = toks[0]
        if head in ("input", "output"):
            if len(toks) < 2:
                raise NetlistSyntaxError(lineno, f"{head} needs a name")
            for name in toks[1:]:
                add_vertex(lineno, Vertex(name, None, PRIMARY_IO, head), 0)
        elif head == "net":
            pending.append((lineno, toks))
        else:
            if head == "cell":
                toks = toks[1:]
            if len(toks) != 2:
                raise NetlistSyntaxError(lineno, "expected 'cell <CellName> <inst>'")
            cname, inst = toks
            if cname not in lib:
                raise NetlistSyntaxError(lineno, f"undefined cell {cname!r}")
            spec = lib[cname]
            kind = SEQUENTIAL if spec.is_sequential else COMBINATIONAL
            add_vertex(lineno, Vertex(inst, cname, kind), spec.width_cpp)

    for lineno, toks in pending:
        if len(toks) < 2:
            raise NetlistSyntaxError(lineno, "net needs a name")
        name, weight, pins, pin_names = toks[1], 1.0, [], []
        for term in toks[2:]:
            if term.startswith("weight="):
                weight = float(term.split("=", 1)[1])
                continue
            inst, _, pin = term.partition(".")
            if inst not in vertices:
                raise NetlistSyntaxError(lineno, f"net {name}: unknown instance {inst!r}")
            v = vertices[inst]
            if v.is_io:
                if pin:
                    raise NetlistSyntaxError(lineno, f"primary IO {inst} takes no pin name")
            else:
                spec = lib[v.cell]
                if not pin:
                    raise NetlistSyntaxError(lineno, f"net {name}: {inst} needs a pin name")
                if pin not in spec.output_pins and pin not in spec.input_pins:
                    raise NetlistSyntaxError(lineno, f"{v.cell} has no pin {pin!r}")
            pins.append(inst)
            pin_names.append(pin)
        if len(pins) < 2:
            raise NetlistSyntaxError(lineno, f"net {name} has fewer than 2 pins")
        if len(set(pins)) != len(pins):
            raise NetlistSyntaxError(lineno, f"net {name} connects an instance twice")
        try:
            edges.append(Hyperedge(name, tuple(pins), tuple(pin_names), weight))
        except NetlistError as exc:
            raise NetlistSyntaxError(lineno, str(exc)) from None
    try:
        return Hypergraph(vertices.values(), edges, widths)
    except NetlistError as exc:
        raise NetlistSyntaxError(0, str(exc)) from None


def emit_netlist(h: Hypergraph) -> str:
    """Canonical emission: instances and nets sorted lexicographically."""
    lines = []
    ios = sorted((v for v in h.vertices if v.is_io), key=lambda v: v.id)
    for v in ios:
        lines.append(f"{v.direction or 'input'} {v.id}")
    for v in sorted((v for v in h.vertices if not v.is_io), key=lambda v: v.id):
        lines.append(f"cell {v.cell} {v.id}")
    for e in sorted(h.edges, key=lambda e: e.id):
        terms = [_term(e.pins[0], e.pin_names[0])]
        terms += [_term(p, n) for p, n in sorted(zip(e.pins[1:], e.pin_names[1:]))]
        w = "" if e.weight == 1.0 else f" weight={e.weight!r}"
        lines.append(f"net {e.id} {' '.join(terms)}{w}")
    return "\n".join(lines) + "\n"


def _term(inst, pin):
    return f"{inst}.{pin}" if pin else inst
