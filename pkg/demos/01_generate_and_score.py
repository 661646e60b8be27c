"""Generate an artificial netlist and measure how close it lands to its target.

A target is six topology numbers: instances, primary IOs, average net
degree, average net span, average logic depth and sequential ratio. The
generator aims at them directly. Score compares two profiles as a product of
per-axis max ratios, so 1.0 is a perfect match and each axis that is off by
2x doubles the score.

    python3 demos/01_generate_and_score.py
"""

from dtcopath.angen import generate_netlist, score
from dtcopath.netcore import PARAM_NAMES, TopoParams, extract_topo_params, preset
from dtcopath.physdes import Floorplan, place

lib, tech = preset("lib2")
target = TopoParams(n_inst=2000, n_prim=50, d_avg=3.0, b_avg=0.5, t_avg=5, s_ratio=0.1)
span = lib.max_comb_width


def measure(params):
    h = generate_netlist(params, lib, seed=1)
    # net span only means something after placement, so place once at 70% density
    fp = Floorplan.for_cells(h.n_inst, span, 0.7, tech.cpp_nm, tech.row_height_nm)
    return h, extract_topo_params(h, lib, place(h, fp, span, seed=0))


h, got = measure(target)
print(f"generated {h.n_inst} instances and {len(h.edges)} nets")

print(f"{'':8}{'target':>10}{'got':>10}")
for name, a, b in zip(PARAM_NAMES, target, got):
    print(f"{name:8}{a:10.3f}{b:10.3f}")
print(f"score = {score(target, got):.3f}")

# the same numbers for a netlist aimed elsewhere are much further off
_, other = measure(TopoParams(2000, 50, 2.6, 0.5, 8, 0.2))
print(f"score against a deeper, flop-heavy netlist = {score(target, other):.3f}")
