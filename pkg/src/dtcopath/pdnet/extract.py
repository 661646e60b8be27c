"""Resistive-network extraction from a PDN mesh and a placement."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .mesh import PdnMesh
from .taps import VDD, VSS, rail_net

_POS_DIGITS = 3


class DisconnectedInstanceError(ValueError):
    def __init__(self, instance, net):
        self.instance, self.net = instance, net
        super().__init__(f"instance {instance} has no {net} path to a pad")


@dataclass
class NetGraph:
    """One net's conductance graph. Node voltages are solved relative to the pads."""

    net: str
    labels: list[tuple[str, float]]          # (line key, position nm)
    a: np.ndarray
    b: np.ndarray
    g: np.ndarray                            # siemens
    pads: np.ndarray                         # node ids held at the ideal supply
    attach: dict[str, int] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.labels)

    def laplacian(self):
        n = self.n
        rows = np.concatenate([self.a, self.b, self.a, self.b])
        cols = np.concatenate([self.b, self.a, self.a, self.b])
        vals = np.concatenate([-self.g, -self.g, self.g, self.g])
        return coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()

    def node_name(self, i: int) -> str:
        key, pos = self.labels[i]
        return f"{self.net}:{key}@{pos:g}"


@dataclass
class ResistiveNetwork:
    nets: dict[str, NetGraph]

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["node_a", "node_b", "conductance"])
            for net in (VDD, VSS):
                ng = self.nets[net]
                for a, b, g in zip(ng.a, ng.b, ng.g):
                    w.writerow([ng.node_name(int(a)), ng.node_name(int(b)), repr(float(g))])

    @property
    def instances(self) -> list[str]:
        return list(self.nets[VDD].attach)


class _NetBuilder:
    def __init__(self, net):
        self.net = net
        self.ids: dict[tuple[str, float], int] = {}
        self.on_line: dict[str, set] = {}
        self.ea, self.eb, self.eg = [], [], []

    def node(self, key, pos):
        k = (key, round(float(pos), _POS_DIGITS))
        if k not in self.ids:
            self.ids[k] = len(self.ids)
            self.on_line.setdefault(key, set()).add(k[1])
        return self.ids[k]

    def edge(self, i, j, g):
        if i != j:
            self.ea.append(i)
            self.eb.append(j)
            self.eg.append(g)


def extract_resistive_network(mesh: PdnMesh, placement=None, attach: dict | None = None) -> ResistiveNetwork:
    """Discretize every line at its links and attachments, then chain the
    nodes along each line with segment conductances.

    Instances attach at their center to the VDD and VSS rails bounding
    their row. ``attach`` maps extra instance ids to ``(x_nm, row)``;
    a placement contributes every placed object. Raises
    DisconnectedInstanceError for an instance with no path to a pad.
    """
    points: dict[str, tuple[float, int]] = dict(attach or {})
    if placement is not None:
        rh = placement.fp.row_height_nm
        for v, (x, y) in zip(placement.obj_ids, placement.xy()):
            points[v] = (float(x), int(y // rh))
    bld = {VDD: _NetBuilder(VDD), VSS: _NetBuilder(VSS)}
    rail_layer = mesh.rails()[0].layer
    for ln in mesh.links:
        nb = bld[ln.net]
        i, j = nb.node(ln.a, ln.a_pos), nb.node(ln.b, ln.b_pos)
        nb.edge(i, j, 1.0 / ln.ohm)
    pad_ids = {VDD: [], VSS: []}
    for key, pos in mesh.pads:
        net = mesh.lines[key].net
        pad_ids[net].append(bld[net].node(key, pos))
    att = {VDD: {}, VSS: {}}
    for v, (x, row) in points.items():
        for b in (row, row + 1):
            net = rail_net(b)
            att[net][v] = bld[net].node(f"{rail_layer}:{b}", x)

    nets = {}
    for net, nb in bld.items():
        for key, positions in nb.on_line.items():
            line = mesh.lines[key]
            ps = sorted(positions)
            for p0, p1 in zip(ps, ps[1:]):
                length_um = (p1 - p0) * 1e-3
                nb.edge(nb.ids[(key, p0)], nb.ids[(key, p1)], 1.0 / (line.ohm_per_um * length_um))
        labels = [None] * len(nb.ids)
        for k, i in nb.ids.items():
            labels[i] = k
        nets[net] = NetGraph(net, labels, np.asarray(nb.ea, dtype=np.int64),
                             np.asarray(nb.eb, dtype=np.int64), np.asarray(nb.eg, dtype=float),
                             np.unique(np.asarray(pad_ids[net], dtype=np.int64)), att[net])
    check_connectivity(ResistiveNetwork(nets))
    return ResistiveNetwork(nets)


def check_connectivity(rn: ResistiveNetwork) -> None:
    for net, ng in rn.nets.items():
        if not ng.attach:
            continue
        lap = ng.laplacian()
        _, comp = connected_components(lap, directed=False)
        good = set(comp[ng.pads].tolist())
        for v, node in ng.attach.items():
            if comp[node] not in good:
                raise DisconnectedInstanceError(v, net)
