"""Minimal static timing: longest path over combinational stages."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from ..netcore.hypergraph import Hypergraph
from ..netcore.library import CellLibrary
from ..netcore.topo import CombinationalCycleError, _find_cycle


@dataclass(frozen=True)
class TimingResult:
    wns_ns: float
    tns_ns: float
    failing_endpoints: int
    max_arrival_ns: float = 0.0

    def __iter__(self):
        return iter((self.wns_ns, self.tns_ns, self.failing_endpoints))


def sta(h: Hypergraph, lib: CellLibrary, net_lengths_nm: dict[str, float] | None,
        clkp_ns: float, wire_ps_per_um: float = 1.5) -> TimingResult:
    """Slack of every timing endpoint under an ideal clock.

    Flop outputs and primary inputs launch at 0. A combinational cell adds
    ``d0 + d1 * fanout`` to its latest input arrival; each net adds its
    lumped wire delay (length times ``wire_ps_per_um``) on the way to its
    sinks. Endpoints are flop data pins and primary outputs; WNS is
    ``clkp`` minus the latest endpoint arrival, so it is positive when
    timing is met.
    """
    lengths = net_lengths_nm or {}
    comb = {v.id for v in h.vertices if v.is_comb}
    fanout = dict.fromkeys((v.id for v in h.vertices), 0)
    for e in h.edges:
        fanout[e.driver] += len(e.sinks)
    stage = {c: (lib[h.vertex(c).cell].intrinsic_delay_ps
                 + lib[h.vertex(c).cell].load_delay_ps_per_fanout * fanout[c]) for c in comb}
    wire = {e.id: lengths.get(e.id, 0.0) * 1e-3 * wire_ps_per_um for e in h.edges}

    succ: dict[str, list] = {}
    indeg = dict.fromkeys(comb, 0)
    for e in h.edges:
        for s in e.sinks:
            if s in comb:
                succ.setdefault(e.driver, []).append((s, e.id))
                if e.driver in comb:
                    indeg[s] += 1
    arr_in = dict.fromkeys(comb, 0.0)    # latest input arrival, ps
    out_t = {v.id: 0.0 for v in h.vertices if not v.is_comb}
    # sources launch first
    for src, t in out_t.items():
        for s, net in succ.get(src, ()):
            arr_in[s] = max(arr_in[s], t + wire[net])
    queue = deque(c for c in (v.id for v in h.vertices) if c in comb and indeg[c] == 0)
    done = 0
    while queue:
        u = queue.popleft()
        done += 1
        t = arr_in[u] + stage[u]
        out_t[u] = t
        for s, net in succ.get(u, ()):
            if s in comb:
                if t + wire[net] > arr_in[s]:
                    arr_in[s] = t + wire[net]
                indeg[s] -= 1
                if indeg[s] == 0:
                    queue.append(s)
    if done != len(comb):
        left = {c for c in comb if indeg[c] > 0}
        raise CombinationalCycleError(_find_cycle(left, {c: [s for s, _ in succ.get(c, ()) if s in comb]
                                                        for c in left}))

    clk_ps = clkp_ns * 1e3
    worst, tns, failing = None, 0.0, 0
    for e in h.edges:
        t = out_t[e.driver] + wire[e.id]
        for s, pin in zip(e.sinks, e.pin_names[1:]):
            v = h.vertex(s)
            if not (v.is_io or (v.is_seq and pin != lib[v.cell].clock)):
                continue
            slack = clk_ps - t
            worst = slack if worst is None else min(worst, slack)
            if slack < 0:
                tns += slack
                failing += 1
    if worst is None:
        return TimingResult(clkp_ns, 0.0, 0, 0.0)
    return TimingResult(worst * 1e-3, tns * 1e-3, failing, (clk_ps - worst) * 1e-3)
