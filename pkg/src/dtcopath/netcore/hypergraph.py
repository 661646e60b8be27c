"""Netlist hypergraph: cells as vertices, nets as weighted hyperedges."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import cached_property

COMBINATIONAL = "combinational"
SEQUENTIAL = "sequential"
PRIMARY_IO = "primary_io"
TAP = "tap"
KINDS = (COMBINATIONAL, SEQUENTIAL, PRIMARY_IO, TAP)


class NetlistError(ValueError):
    """Structurally invalid netlist."""


@dataclass(frozen=True)
class Vertex:
    id: str
    cell: str | None
    kind: str
    direction: str | None = None  # "input" / "output" for primary IOs

    @property
    def is_comb(self) -> bool:
        return self.kind == COMBINATIONAL

    @property
    def is_seq(self) -> bool:
        return self.kind == SEQUENTIAL

    @property
    def is_io(self) -> bool:
        return self.kind == PRIMARY_IO


@dataclass(frozen=True)
class Hyperedge:
    """A net. ``pins[0]`` is the driver; ``pin_names`` parallels ``pins``."""

    id: str
    pins: tuple[str, ...]
    pin_names: tuple[str, ...] = ()
    weight: float = 1.0

    def __post_init__(self):
        if not self.pin_names:
            object.__setattr__(self, "pin_names", ("",) * len(self.pins))
        if len(self.pin_names) != len(self.pins):
            raise NetlistError(f"net {self.id}: pin_names length mismatch")
        if self.weight <= 0:
            raise NetlistError(f"net {self.id}: weight must be positive")

    @property
    def driver(self) -> str:
        return self.pins[0]

    @property
    def sinks(self) -> tuple[str, ...]:
        return self.pins[1:]

    def __len__(self):
        return len(self.pins)


class Hypergraph:
    """Immutable hypergraph H(V, E, W).

    Parameters
    ----------
    vertices : iterable of Vertex
    edges : iterable of Hyperedge
    widths : mapping vertex id -> width in CPP. Missing entries default to 0.
    """

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[Hyperedge],
                 widths: Mapping[str, int] | None = None):
        self.vertices: tuple[Vertex, ...] = tuple(vertices)
        self.edges: tuple[Hyperedge, ...] = tuple(edges)
        self._by_id = {}
        for v in self.vertices:
            if v.kind not in KINDS:
                raise NetlistError(f"vertex {v.id}: unknown kind {v.kind!r}")
            if v.id in self._by_id:
                raise NetlistError(f"duplicate vertex id {v.id}")
            self._by_id[v.id] = v
        seen = set()
        for e in self.edges:
            if e.id in seen:
                raise NetlistError(f"duplicate net id {e.id}")
            seen.add(e.id)
            if len(e.pins) < 2:
                raise NetlistError(f"net {e.id} has fewer than 2 pins")
            if len(set(e.pins)) != len(e.pins):
                raise NetlistError(f"net {e.id} has duplicate pins")
            for p in e.pins:
                if p not in self._by_id:
                    raise NetlistError(f"net {e.id} references unknown vertex {p}")
        widths = dict(widths or {})
        self.widths: dict[str, int] = {v.id: int(widths.get(v.id, 0)) for v in self.vertices}

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, vid) -> bool:
        return vid in self._by_id

    def vertex(self, vid: str) -> Vertex:
        return self._by_id[vid]

    @cached_property
    def index(self) -> dict[str, int]:
        return {v.id: i for i, v in enumerate(self.vertices)}

    @cached_property
    def incident(self) -> dict[str, tuple[int, ...]]:
        """Vertex id -> indices of incident edges."""
        acc: dict[str, list[int]] = {v.id: [] for v in self.vertices}
        for k, e in enumerate(self.edges):
            for p in e.pins:
                acc[p].append(k)
        return {vid: tuple(ks) for vid, ks in acc.items()}

    def neighbors(self, vid: str) -> list[str]:
        """Adjacent vertices in first-seen order."""
        out, seen = [], {vid}
        for k in self.incident[vid]:
            for p in self.edges[k].pins:
                if p not in seen:
                    seen.add(p)
                    out.append(p)
        return out

    def of_kind(self, kind: str) -> list[Vertex]:
        return [v for v in self.vertices if v.kind == kind]

    @property
    def n_inst(self) -> int:
        return sum(1 for v in self.vertices if not v.is_io)

    def with_widths(self, widths: Mapping[str, int]) -> Hypergraph:
        merged = dict(self.widths)
        merged.update(widths)
        return Hypergraph(self.vertices, self.edges, merged)

    def canonical(self):
        """Order-independent form used for equality and round-trip checks."""
        verts = tuple(sorted((v.id, v.cell or "", v.kind, v.direction or "",
                              self.widths[v.id]) for v in self.vertices))
        nets = []
        for e in self.edges:
            sinks = tuple(sorted(zip(e.pins[1:], e.pin_names[1:])))
            nets.append((e.id, (e.pins[0], e.pin_names[0]), sinks, float(e.weight)))
        return verts, tuple(sorted(nets))

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return f"Hypergraph(|V|={len(self.vertices)}, |E|={len(self.edges)})"
