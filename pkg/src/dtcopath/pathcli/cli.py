"""Command-line entry point: gen, cluster, kth, sweep, report and ir."""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from ..netcore.topo import PARAM_NAMES, TopoParams
from ..pdnet.config import SCHEMES, SHORT_KINDS
from .config import (DESK_DESIGN, REGULARIZATIONS, ConfigError, DesignSpec, ExperimentConfig,
                     load_config, make_pdn, resolve_lib)

EXIT_CONFIG = 2


def _params_arg(text: str) -> TopoParams:
    """``n_inst=2000,n_prim=50,...`` or six comma-separated numbers."""
    parts = [p for p in text.replace(" ", "").split(",") if p]
    try:
        if all("=" in p for p in parts):
            kv = dict(p.split("=", 1) for p in parts)
            if set(kv) != set(PARAM_NAMES):
                raise ValueError
            return TopoParams(**{k: float(v) for k, v in kv.items()})
        return TopoParams.from_seq(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected six values or {'=..,'.join(PARAM_NAMES)}=..") from None


def add_common(p: argparse.ArgumentParser, grid: bool = False) -> None:
    many = {"nargs": "+"} if grid else {}
    p.add_argument("--lib", default="lib2", help="lib1..lib4 or a library file")
    p.add_argument("--pdn", choices=sorted(SHORT_KINDS), default="fs", **many)
    p.add_argument("--tap-pitch", type=int, default=None,
                   help="tap pitch in CPP for fb/bs (default 48)")
    p.add_argument("--tap-scheme", type=str.lower, choices=[s.lower() for s in SCHEMES],
                   default=None, help="tap scheme for fb/bs (default column)")
    p.add_argument("--util", type=float, default=[0.9] if grid else 0.9, **many)
    p.add_argument("--clkp", type=float, default=[0.2] if grid else 0.2, **many,
                   help="clock period, ns")
    p.add_argument("--seed", type=int, default=[0] if grid else 0, **many)
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory")


def add_design(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--netlist", type=Path, help="netlist file")
    g.add_argument("--params", type=_params_arg,
                   help="generate a design from six topology parameters")
    p.add_argument("--gen-seed", type=int, default=None, help="generator seed")
    p.add_argument("--regularization", choices=REGULARIZATIONS, default="clustered")


def design_from(args) -> DesignSpec:
    if args.netlist is not None:
        return DesignSpec(args.netlist.stem, path=str(args.netlist))
    if args.params is not None:
        return DesignSpec("gen", args.params, gen_seed=args.gen_seed or 0)
    if args.gen_seed is not None:
        return DesignSpec(DESK_DESIGN.name, DESK_DESIGN.params, gen_seed=args.gen_seed)
    return DESK_DESIGN


def pdn_from(kind, args):
    if kind in ("fb", "bs"):
        return make_pdn(kind, args.tap_pitch or 48, args.tap_scheme or "column")
    if args.tap_pitch is not None or args.tap_scheme is not None:
        # a sweep may mix tap and non-tap kinds; tap flags only bind fb/bs
        if not isinstance(args.pdn, list):
            raise ConfigError(f"--pdn {kind} takes no tap cells")
    return make_pdn(kind)


def _write_kv(path: Path, rows: list[tuple]) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in rows:
            w.writerow([k, repr(v) if isinstance(v, float) else v])


def _load(args):
    lib, tech = resolve_lib(args.lib)
    spec = design_from(args)
    try:
        h = spec.load(lib)
    except OSError as e:
        raise ConfigError(f"cannot read netlist: {e}") from None
    return spec, h, lib, tech


def cmd_gen(args) -> int:
    from ..angen.generator import generate_netlist
    from ..netcore.formats import emit_netlist
    from ..netcore.topo import extract_topo_params
    lib, _ = resolve_lib(args.lib)
    target = args.params or DESK_DESIGN.params
    h = generate_netlist(target, lib, seed=args.seed)
    got = extract_topo_params(h, lib)
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "netlist.net").write_text(emit_netlist(h))
    with open(args.out / "topo_params.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["param", "target", "generated"])
        for name, t, g in zip(PARAM_NAMES, target, got):
            w.writerow([name, repr(float(t)), "" if g is None else repr(float(g))])
    print(f"wrote {args.out / 'netlist.net'} ({h.n_inst} instances)")
    return 0


def cmd_cluster(args) -> int:
    from ..cwreg.baseline import (RegularizedStats, placement_induced_cluster,
                                  regularized_netlist_stats)
    from ..cwreg.cluster import cwr_fc_cluster
    from ..netcore.topo import width_regularize_naive
    from ..physdes.floorplan import Floorplan
    from ..physdes.place import place
    _, h, lib, tech = _load(args)
    w_max = args.w_max or lib.max_comb_width
    hc, cm = cwr_fc_cluster(h, w_max, args.n_iter)
    args.out.mkdir(parents=True, exist_ok=True)
    cm.write_csv(args.out / "cluster_map.csv")
    naive = width_regularize_naive(h, lib)
    fp = Floorplan.for_cells(naive.n_inst, w_max, args.util, tech.cpp_nm, tech.row_height_nm)
    hb, _ = placement_induced_cluster(place(naive, fp, w_max, seed=args.seed), w_max, h)
    stats = [regularized_netlist_stats(h, g, tech, args.util, w_max, label, args.route, args.seed)
             for label, g in (("A", naive), ("B", hb), ("C", hc))]
    with open(args.out / "regularized_stats.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(RegularizedStats.HEADER)
        for s in stats:
            w.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v)
                        for v in s.row()])
    for s in stats:
        print(f"[{s.label}] insts={s.n_inst} area={s.core_area_um2:.3f}um2 "
              f"actual_util={s.actual_util:.3f}")
    print(f"clustering took {cm.iterations} iteration(s)")
    return 0


def cmd_kth(args) -> int:
    from ..physdes.kth import kth_on_placement, pdn_derates
    from ..physdes.place import place
    from .pipeline import floorplan_for, regularize
    spec, h, lib, tech = _load(args)
    pdn = pdn_from(args.pdn, args)
    reg = regularize(h, lib, args.regularization)
    fp = floorplan_for(reg, tech, args.util, pdn)
    p = place(reg.h, fp, reg.span, seed=args.seed)
    res = kth_on_placement(p, tech, pdn_derates(pdn), args.seed,
                           k_grid=tuple(range(1, args.k_max + 1)), refine=args.refine)
    args.out.mkdir(parents=True, exist_ok=True)
    res.write_csv(args.out / "kth_trace.csv")
    _write_kv(args.out / "kth.csv", [("design", spec.name), ("library", args.lib),
                                      ("pdn", pdn.label), ("util", args.util),
                                      ("seed", args.seed), ("kth", res.label)])
    print(f"Kth = {res.label} ({pdn.label}, util {args.util})")
    return 0


def sweep_config(args) -> ExperimentConfig:
    if args.config is not None:
        return load_config(args.config)
    spec = design_from(args)
    return ExperimentConfig((spec,), (args.lib,), tuple(pdn_from(k, args) for k in args.pdn),
                            tuple(args.util), tuple(args.clkp), tuple(args.seed),
                            (args.regularization,), args.mode, args.activity, args.workers,
                            args.refine)


def cmd_sweep(args) -> int:
    from .reports import emit_reports
    from .sweep import run_sweep
    cfg = sweep_config(args)
    args.out.mkdir(parents=True, exist_ok=True)
    n = len(cfg)

    def progress(rec):
        tag = "error" if rec.error else ("valid" if rec.valid else "invalid")
        if rec.mode == "kth" and not rec.error:
            tag = f"kth={rec.kth:g}"
        print(f"[{rec.design} {rec.pdn_label} util={rec.util} clkp={rec.clkp_ns}] {tag}",
              flush=True)

    rows = run_sweep(cfg, args.out / "runs.csv", progress=None if args.quiet else progress)
    emit_reports(rows, args.out)
    bad = sum(1 for r in rows if r.error)
    print(f"{n} grid points, {sum(1 for r in rows if r.valid)} valid, {bad} errors")
    return 0


def cmd_report(args) -> int:
    from .records import read_records
    from .reports import emit_reports
    runs = args.runs or args.out / "runs.csv"
    try:
        rows = read_records(runs)
    except (OSError, ValueError) as e:
        raise ConfigError(f"cannot read runs: {e}") from None
    if not rows:
        raise ConfigError(f"{runs} holds no rows")
    b = emit_reports(rows, args.out)
    for name in b.tradeoffs:
        print(f"{name}: {len(b.tradeoffs[name])} valid rows, {len(b.pareto(name))} on the Pareto front")
    return 0


def cmd_ir(args) -> int:
    from ..irsolve.solver import eiv_percentile, ir_valid
    from ..physdes.place import place
    from .pipeline import floorplan_for, ir_analysis, regularize
    _, h, lib, tech = _load(args)
    pdn = pdn_from(args.pdn, args)
    reg = regularize(h, lib, args.regularization)
    fp = floorplan_for(reg, tech, args.util, pdn)
    p = place(reg.h, fp, reg.span, seed=args.seed)
    res, mesh, net = ir_analysis(h, lib, tech, pdn, p, reg.cmap, 1.0 / args.clkp, args.activity)
    args.out.mkdir(parents=True, exist_ok=True)
    res.write_csv(args.out / "ir_instances.csv")
    if args.network:
        net.write_csv(args.out / "pdn_network.csv")
    eiv = eiv_percentile(res)
    print(f"{pdn.label}: worst drop {res.worst_vdrop_v * 1e3:.3f} mV, EIV p99.7 {eiv:.4f} V "
          f"({'pass' if ir_valid(eiv, tech.vop_v) else 'fail'}), "
          f"{len(mesh.taps)} taps")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dtcopath", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("gen", help="generate an artificial netlist")
    add_common(p)
    p.add_argument("--params", type=_params_arg, default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("cluster", help="width-regularize a netlist and compare A/B/C")
    add_common(p)
    add_design(p)
    p.add_argument("--w-max", type=int, default=None)
    p.add_argument("--n-iter", type=int, default=20)
    p.add_argument("--route", action="store_true", help="also route for wirelength")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("kth", help="routability by progressive tangling")
    add_common(p)
    add_design(p)
    p.add_argument("--k-max", type=int, default=64)
    p.add_argument("--refine", type=int, default=0)
    p.set_defaults(func=cmd_kth)

    p = sub.add_parser("sweep", help="run a parameter grid")
    add_common(p, grid=True)
    add_design(p)
    p.add_argument("--config", type=Path, default=None, help="keyed-text sweep config")
    p.add_argument("--mode", choices=("ppac", "kth"), default="ppac")
    p.add_argument("--activity", type=float, default=0.2)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--refine", type=int, default=0)
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="tradeoff CSVs, Pareto sets, deltas and Kth ranks")
    p.add_argument("--runs", type=Path, default=None, help="runs CSV (default OUT/runs.csv)")
    p.add_argument("--out", type=Path, default=Path("out"))
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("ir", help="static IR drop of one placed design")
    add_common(p)
    add_design(p)
    p.add_argument("--activity", type=float, default=0.2)
    p.add_argument("--network", action="store_true", help="also write the resistive network")
    p.set_defaults(func=cmd_ir)
    return ap


def _input_errors() -> tuple:
    from ..angen.generator import InfeasibleParams
    from ..netcore.hypergraph import NetlistError
    from ..netcore.library import LibraryError
    from ..pdnet.config import PdnConfigError
    from ..physdes.floorplan import FloorplanError
    return (ConfigError, InfeasibleParams, NetlistError, LibraryError, PdnConfigError,
            FloorplanError)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _input_errors() as e:
        print(f"dtcopath: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":    # pragma: no cover
    sys.exit(main())
