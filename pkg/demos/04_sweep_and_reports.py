"""A small resumable sweep and the tradeoff reports it feeds.

Each grid point runs the whole flow and appends one row to runs.csv. If the
sweep stops early, running it again skips the finished rows. The reports
mark the Pareto-optimal runs of each tradeoff and compare every PDN with the
frontside reference.

    python3 demos/04_sweep_and_reports.py [out_dir]
"""

import csv
import sys
from pathlib import Path

from dtcopath.netcore import TopoParams
from dtcopath.pathcli import DesignSpec, ExperimentConfig, emit_reports, make_pdn, run_sweep

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_sweep")
out.mkdir(parents=True, exist_ok=True)

design = DesignSpec("small", TopoParams(800, 30, 2.8, 0.5, 5, 0.1), gen_seed=1)
cfg = ExperimentConfig((design,), pdns=(make_pdn("fs"), make_pdn("bs", 48, "column"), make_pdn("bb")),
                       utils=(0.7, 0.85), clkps=(0.16, 0.22))
rows = run_sweep(cfg, out / "runs.csv",
                 progress=lambda r: print(f"  {r.pdn_label:16} util {r.util:.2f} clkp {r.clkp_ns:.2f}"
                                          f"  valid={r.valid}"))
print(f"{len(rows)} runs in {out / 'runs.csv'}")

# a second call finds every point done and runs nothing
assert run_sweep(cfg, out / "runs.csv") == rows

bundle = emit_reports(rows, out)
with open(bundle.paths["performance_power"]) as f:
    front = [r for r in csv.DictReader(f) if r["pareto"] == "1"]
print("performance/power Pareto front:")
for r in front:
    print(f"  {r['pdn']:16} util {r['util']} clkp {r['clkp_ns']}")
with open(bundle.paths["deltas"]) as f:
    for r in csv.DictReader(f):
        print(f"  {r['tradeoff']:18} {r['pdn']:16} {float(r['delta_pct']):+.2f}% vs P_FS")
