"""Compare the four power delivery networks on one placed design.

Frontside (P_FS) and frontside with buried rails (P_FB) feed cells from the
top of the stack. Backside (P_BS) and backside with buried rails (P_BB) feed
them through nano-TSVs from below. P_FB and P_BS need tap cells, which take
row sites. The IR solve reports the worst and 99.7th-percentile-tail
effective instance voltage.

    python3 demos/03_pdn_ir_drop.py
"""

from dtcopath.pathcli import DESK_DESIGN, make_pdn
from dtcopath.pathcli.pipeline import floorplan_for, ir_analysis, regularize
from dtcopath.irsolve import eiv_percentile
from dtcopath.netcore import preset
from dtcopath.physdes import place

lib, tech = preset("lib2")
h = DESK_DESIGN.load(lib)
reg = regularize(h, lib)
f_ghz = 4.0

print(f"{'pdn':20}{'taps':>6}{'core um2':>10}{'worst mV':>10}{'EIV p99.7 V':>13}")
for pdn in (make_pdn("fs"), make_pdn("fb", 48, "column"), make_pdn("bs", 48, "staggered"),
            make_pdn("bb")):
    fp = floorplan_for(reg, tech, 0.8, pdn)
    p = place(reg.h, fp, reg.span, seed=0)
    res, mesh, _ = ir_analysis(h, lib, tech, pdn, p, reg.cmap, f_ghz)
    area = fp.width_nm * fp.height_nm * 1e-6
    print(f"{pdn.label:20}{len(mesh.taps):6d}{area:10.1f}"
          f"{res.worst_vdrop_v * 1e3:10.4f}{eiv_percentile(res):13.6f}")
