"""Small hand-built netlists and resistive networks shared by the tests."""

from __future__ import annotations

import numpy as np

from dtcopath.netcore import Hyperedge, Hypergraph, Vertex
from dtcopath.pdnet.extract import NetGraph, ResistiveNetwork
from dtcopath.pdnet.taps import VDD, VSS


def chain(lib, cells=("INV_X1", "NAND2_X1", "INV_X2"), flop="DFFHQN_X1"):
    """pi -> c0 -> c1 -> ... -> flop.D, flop.Q -> po, plus a clock net."""
    vs = [Vertex("pi", None, "primary_io", "input"), Vertex("clk", None, "primary_io", "input"),
          Vertex("po", None, "primary_io", "output")]
    widths = {}
    for i, c in enumerate(cells):
        vs.append(Vertex(f"c{i}", c, "combinational"))
        widths[f"c{i}"] = lib[c].width_cpp
    vs.append(Vertex("ff", flop, "sequential"))
    widths["ff"] = lib[flop].width_cpp
    spec = lib[flop]
    es = [Hyperedge("n_in", ("pi", "c0"), ("", lib[cells[0]].inputs[0]))]
    for i in range(1, len(cells)):
        es.append(Hyperedge(f"n{i}", (f"c{i - 1}", f"c{i}"),
                            (lib[cells[i - 1]].output, lib[cells[i]].inputs[0])))
    last = len(cells) - 1
    es.append(Hyperedge("n_d", (f"c{last}", "ff"), (lib[cells[last]].output, spec.inputs[0])))
    es.append(Hyperedge("n_q", ("ff", "po"), (spec.output, "")))
    es.append(Hyperedge("n_clk", ("clk", "ff"), ("", spec.clock)))
    return Hypergraph(vs, es, widths)


def random_small_hypergraph(seed: int, lib, max_comb: int = 8, max_seq: int = 2):
    """1..max_comb combinational vertices, a few flops and IOs, random nets."""
    rng = np.random.default_rng(seed)
    combs = lib.combinational()
    seqs = lib.sequential()
    nc = int(rng.integers(1, max_comb + 1))
    ns = int(rng.integers(0, max_seq + 1))
    vs, widths = [], {}
    for i in range(nc):
        c = combs[int(rng.integers(len(combs)))]
        vs.append(Vertex(f"c{i}", c.name, "combinational"))
        widths[f"c{i}"] = c.width_cpp
    for i in range(ns):
        c = seqs[int(rng.integers(len(seqs)))]
        vs.append(Vertex(f"s{i}", c.name, "sequential"))
        widths[f"s{i}"] = c.width_cpp
    vs += [Vertex("pi", None, "primary_io", "input"), Vertex("po", None, "primary_io", "output")]
    ids = [v.id for v in vs]
    es = []
    for j in range(int(rng.integers(1, 2 * nc + 3))):
        k = int(rng.integers(2, min(5, len(ids)) + 1))
        pins = tuple(str(p) for p in rng.choice(ids, k, replace=False))
        es.append(Hyperedge(f"n{j}", pins, weight=float(rng.choice([1.0, 1.0, 2.0]))))
    return Hypergraph(vs, es, widths)


def _netgraph(net, n, edges, pads, attach):
    a = np.array([e[0] for e in edges], dtype=np.int64)
    b = np.array([e[1] for e in edges], dtype=np.int64)
    g = np.array([e[2] for e in edges], dtype=float)
    labels = [("n", float(i)) for i in range(n)]
    return NetGraph(net, labels, a, b, g, np.asarray(sorted(pads), dtype=np.int64), dict(attach))


def ladder(conductances, names=None):
    """Series ladder from a pad at node 0; instance k hangs on node k (1-based).

    Both supply nets get the same ladder, so each instance's drop is twice
    its VDD droop.
    """
    n = len(conductances) + 1
    edges = [(i, i + 1, g) for i, g in enumerate(conductances)]
    names = names or [f"i{k}" for k in range(1, n)]
    attach = {v: k + 1 for k, v in enumerate(names)}
    return ResistiveNetwork({net: _netgraph(net, n, edges, [0], attach) for net in (VDD, VSS)})


def ladder_drop(conductances, currents_ma):
    """Closed-form VDD droop (V) at every ladder node 1..n."""
    amps = np.asarray(currents_ma, dtype=float) * 1e-3
    downstream = np.cumsum(amps[::-1])[::-1]
    return np.cumsum(downstream / np.asarray(conductances, dtype=float))


def random_network(rng, n_nodes: int, n_inst: int, n_pads: int = 2):
    """Random connected conductance graphs for both nets, shared instance names."""
    names = [f"i{k}" for k in range(n_inst)]
    nets = {}
    for net in (VDD, VSS):
        edges = []
        for i in range(1, n_nodes):
            edges.append((int(rng.integers(0, i)), i, float(rng.lognormal(0.0, 1.0))))
        for _ in range(n_nodes // 2):
            i, j = rng.integers(0, n_nodes, size=2)
            if i != j:
                edges.append((int(i), int(j), float(rng.lognormal(0.0, 1.0))))
        pads = set(int(x) for x in rng.choice(n_nodes, size=min(n_pads, n_nodes - 1), replace=False))
        free = [i for i in range(n_nodes) if i not in pads]
        attach = {v: int(rng.choice(free)) for v in names}
        nets[net] = _netgraph(net, n_nodes, edges, pads, attach)
    return ResistiveNetwork(nets)
