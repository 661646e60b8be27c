import csv
import math
import subprocess
import sys
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from builders import chain
from dtcopath.pathcli import (HEADER, ConfigError, DesignSpec, ExperimentConfig, MetricError,
                              RunRecord, emit_reports, fmax, from_row, load_config, make_pdn,
                              parse_config, pareto_mask, read_records, run_sweep, to_row,
                              total_power, write_records)
from dtcopath.pathcli.cli import main
from dtcopath.pathcli.reports import (delta_rows, dominates, kth_rank_rows, ordering_rows,
                                      second_largest)
from dtcopath.netcore import TopoParams

TINY = "300,20,2.4,0.5,5,0.1"
TINY_DESIGN = DesignSpec("tiny", TopoParams(300, 20, 2.4, 0.5, 5, 0.1), gen_seed=0)


def test_fmax_and_power(lib2):
    assert fmax(0.2, 0.0) == pytest.approx(5.0)
    assert fmax(0.2, -0.05) == pytest.approx(4.0)
    with pytest.raises(MetricError):
        fmax(0.1, 0.2)
    h = chain(lib2)
    p = total_power(h, lib2, 2.0, activity=0.5)
    want = sum(lib2[c].leakage_mw + lib2[c].dyn_energy_mw_per_ghz
               for c in ("INV_X1", "NAND2_X1", "INV_X2", "DFFHQN_X1"))
    assert p == pytest.approx(want)
    with pytest.raises(MetricError):
        total_power(h, lib2, -1.0)


opt_float = st.none() | st.floats(allow_nan=False, allow_infinity=False)
opt_int = st.none() | st.integers(-10**6, 10**6)
text = st.text(st.characters(blacklist_categories=("Cs",), blacklist_characters="\r\n\x00"),
               max_size=12)
records = st.builds(
    RunRecord, design=text.filter(bool), library=st.sampled_from(["lib1", "lib2"]),
    pdn=st.sampled_from(["P_FS", "P_BS"]), i_pitch=st.none() | st.sampled_from([24, 48]),
    i_scheme=st.none() | st.sampled_from(["Column", "Staggered"]),
    util=st.floats(0.01, 1.0), clkp_ns=st.none() | st.floats(0.05, 1.0),
    seed=st.integers(0, 99), n_inst=opt_int, wirelength=opt_float, drc_proxy=opt_int,
    wns_ns=opt_float, eiv_p997_v=opt_float, kth=st.none() | st.just(math.inf) | st.floats(0, 64),
    valid=st.none() | st.booleans(), error=text,
)


@settings(max_examples=200)
@given(records)
def test_record_row_round_trip(rec):
    assert from_row(to_row(rec)) == rec


@settings(max_examples=30)
@given(st.lists(records, max_size=5))
def test_record_file_round_trip(tmp_path_factory, recs):
    path = tmp_path_factory.mktemp("rec") / "runs.csv"
    write_records(path, recs)
    assert read_records(path) == recs


def test_record_errors(tmp_path):
    with pytest.raises(ValueError):
        from_row(["x"])
    (tmp_path / "bad.csv").write_text("a,b\n")
    with pytest.raises(ValueError):
        read_records(tmp_path / "bad.csv")
    (tmp_path / "empty.csv").write_text("")
    assert read_records(tmp_path / "empty.csv") == []


def test_record_labels_and_keys():
    r = RunRecord("d", "lib2", "P_BS", 48, "Column", 0.9, 0.2, 0)
    assert r.pdn_label == "P_BS-48-Column"
    assert r.key == ("d", "lib2", "clustered", "P_BS-48-Column", 0.9, 0.2, 0, "ppac")
    assert r.completed and not replace(r, error="boom").completed
    assert HEADER[0] == "design"


GOOD_CONFIG = """
# two designs, one grid
design a n_inst=300 n_prim=20 d_avg=2.4 b_avg=0.5 t_avg=5 s_ratio=0.1 seed=3
design b file=some.net
lib lib2
pdn fs
pdn bs pitch=48 scheme=staggered
util 0.7 0.8
clkp 0.2
seeds 0 1
regularization clustered naive
activity 0.3
"""


def test_parse_config_grid():
    cfg = parse_config(GOOD_CONFIG)
    assert [d.name for d in cfg.designs] == ["a", "b"]
    assert cfg.designs[0].gen_seed == 3 and cfg.designs[1].path == "some.net"
    assert [p.label for p in cfg.pdns] == ["P_FS", "P_BS-48-Staggered"]
    assert len(cfg) == 2 * 1 * 2 * 2 * 2 * 1 * 2
    assert cfg.activity == 0.3
    kth = parse_config("design a file=x\nmode kth\nclkp 0.2 0.3")
    assert {p[5] for p in kth.points()} == {None}


@pytest.mark.parametrize("text, needle", [
    ("", "designs grid is empty"),
    ("design", "needs a name"),
    ("design a n_inst=1", "missing"),
    ("design a file=x extra=1", "unexpected keys"),
    ("design a n_inst=1 n_prim=1 d_avg=2 b_avg=1 t_avg=1 s_ratio=1 zz=1", "unexpected keys"),
    ("design a", "missing n_inst"),
    ("design a file=x\ndesign a file=y", "unique"),
    ("design a file=x\nutil 1.5", "outside"),
    ("design a file=x\nutil high", "expected numbers"),
    ("design a file=x\nclkp 0", "positive"),
    ("design a file=x\nmode fast", "mode must be"),
    ("design a file=x\nregularization fuzzy", "regularization must be"),
    ("design a file=x\nlib nowhere.lib", "neither a preset"),
    ("design a file=x\npdn fb", "needs tap_pitch"),
    ("design a file=x\npdn fs pitch=48", "takes no tap"),
    ("design a file=x\npdn fs color=red", "unexpected pdn keys"),
    ("design a file=x\nworkers 0", "workers"),
    ("design a file=x\nworkers many", "bad workers"),
    ("design a file=x\nseeds x", "integers"),
    ("design a file=x\nfrobnicate", "unknown statement"),
])
def test_config_errors(text, needle):
    with pytest.raises(ConfigError, match=needle):
        parse_config(text)


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "nope.cfg")
    with pytest.raises(ConfigError):
        make_pdn("bs", 50, "column")
    with pytest.raises(ConfigError, match="either"):
        DesignSpec("x")


def _tiny_cfg(**kw):
    base = dict(designs=(TINY_DESIGN,), pdns=(make_pdn("fs"), make_pdn("bb")),
                utils=(0.7, 0.9), clkps=(0.2,))
    base.update(kw)
    return ExperimentConfig(**base)


def test_sweep_resumes_after_interruption(tmp_path):
    cfg = _tiny_cfg()
    full = run_sweep(cfg, tmp_path / "full.csv")
    assert [r.error for r in full] == [""] * 4

    class Stop(Exception):
        pass

    def stop_after_one(rec):
        raise Stop

    part = tmp_path / "part.csv"
    with pytest.raises(Stop):
        run_sweep(cfg, part, progress=stop_after_one)
    with open(part, "a") as f:
        f.write("tiny,lib2,P_BB,,,0.")   # a torn write
    seen = []
    resumed = run_sweep(cfg, part, progress=seen.append)
    assert len(seen) == 3
    assert resumed == full
    assert part.read_bytes() == (tmp_path / "full.csv").read_bytes()


def test_sweep_refuses_foreign_rows(tmp_path):
    out = tmp_path / "runs.csv"
    run_sweep(_tiny_cfg(utils=(0.7,)), out)
    with pytest.raises(ValueError, match="outside this grid"):
        run_sweep(_tiny_cfg(utils=(0.9,)), out)


def test_failed_points_become_error_rows():
    cfg = _tiny_cfg(designs=(DesignSpec("broken", TopoParams(300, 20, 1.5, 0.5, 5, 0.1)),),
                    pdns=(make_pdn("fs"),), utils=(0.7,))
    (rec,) = run_sweep(cfg)
    assert rec.error.startswith("InfeasibleParams") and rec.valid is None


def test_kth_mode_sweep():
    rows = run_sweep(_tiny_cfg(mode="kth", clkps=(), utils=(0.9,)))
    assert all(r.mode == "kth" and r.kth is not None and r.clkp_ns is None for r in rows)


@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=12),
       st.sampled_from([1, -1]), st.sampled_from([1, -1]))
def test_pareto_mask_definition(points, sx, sy):
    mask = pareto_mask(points, sx, sy)
    front = [p for p, m in zip(points, mask) if m]
    assert front
    for p, m in zip(points, mask):
        dominated = any(dominates(q, p, sx, sy) for q in points)
        assert m == (not dominated)
    for a in front:
        for b in front:
            assert not dominates(a, b, sx, sy)


def test_dominates_needs_strict_improvement():
    assert dominates((2, 1), (1, 1), 1, -1)
    assert not dominates((1, 1), (1, 1), 1, -1)
    assert not dominates((2, 2), (1, 1), 1, -1)


def test_second_largest():
    assert second_largest([3, 1, 3, 2]) == 2
    assert second_largest([5]) == 5
    assert second_largest([]) is None


def _row(pdn, util, clkp, **kw):
    base = dict(valid=True, fmax_ghz=1.0, total_power_mw=1.0, area_um2=1.0, edp=1.0,
                eiv_p997_v=0.7)
    base.update(kw)
    return RunRecord("d", "lib2", pdn, None, None, util, clkp, 0, **base)


def test_delta_uses_second_largest_x():
    rows = [_row("P_FS", 0.7, c, fmax_ghz=f, total_power_mw=p)
            for c, f, p in ((0.1, 3.0, 9.0), (0.2, 2.0, 5.0), (0.3, 1.0, 2.0))]
    rows += [_row("P_BB", 0.7, c, fmax_ghz=f, total_power_mw=p)
             for c, f, p in ((0.1, 3.5, 8.0), (0.2, 2.5, 4.0), (0.3, 1.5, 1.0))]
    (d,) = delta_rows(rows, "performance_power")
    assert (d["x_pdn"], d["x_ref"]) == (2.5, 2.0)
    assert d["delta"] == pytest.approx(-1.0) and d["delta_pct"] == pytest.approx(-20.0)


def test_kth_rank_and_orderings():
    rows = [RunRecord("d", "lib2", p, None, None, 0.9, None, s, mode="kth", kth=k)
            for p, s, k in (("A", 0, 6.0), ("B", 0, 9.0), ("C", 0, math.inf), ("C", 1, 4.0))]
    ranks = kth_rank_rows(rows)
    assert [(r["pdn"], r["rank"]) for r in ranks] == [("A", 1), ("B", 2), ("C", 3)]
    assert ranks[2]["n_runs"] == 2
    naive = [replace(r, regularization="naive") for r in rows if r.pdn != "C"]
    orders = ordering_rows(kth_rank_rows(rows + naive))
    assert {o["regularization"]: o["ordering"] for o in orders} == {
        "clustered": "A < B < C", "naive": "A < B"}


def test_emit_reports_writes_every_table(tmp_path):
    rows = [_row("P_FS", 0.7, 0.2), _row("P_BB", 0.7, 0.2, area_um2=0.5),
            _row("P_BB", 0.8, 0.2, valid=False)]
    b = emit_reports(rows, tmp_path)
    assert set(b.paths) == {"performance_power", "performance_area", "edp_area", "ir_area",
                            "deltas", "kth_rank", "orderings"}
    with open(b.paths["performance_area"]) as f:
        got = list(csv.DictReader(f))
    assert len(got) == 2
    assert {r["pdn"]: r["pareto"] for r in got} == {"P_FS": "0", "P_BB": "1"}
    with pytest.raises(ValueError):
        emit_reports([])


def test_cli_runs_every_subcommand(tmp_path, capsys):
    out = tmp_path / "o"
    assert main(["gen", "--params", TINY, "--out", str(out / "g")]) == 0
    net = out / "g" / "netlist.net"
    assert net.exists()
    assert main(["cluster", "--netlist", str(net), "--out", str(out / "c")]) == 0
    assert main(["kth", "--params", TINY, "--k-max", "4", "--out", str(out / "k")]) == 0
    assert main(["ir", "--params", TINY, "--pdn", "bs", "--network", "--out", str(out / "i")]) == 0
    assert (out / "i" / "pdn_network.csv").exists()
    assert main(["sweep", "--params", TINY, "--pdn", "fs", "bb", "--util", "0.7",
                 "--out", str(out / "s"), "--quiet"]) == 0
    assert main(["report", "--out", str(out / "s")]) == 0
    text = capsys.readouterr().out
    assert "Kth = " in text and "Pareto" in text


@pytest.mark.parametrize("argv", [
    ["gen", "--params", "300,20,1.5,0.5,5,0.1"],
    ["ir", "--pdn", "fs", "--tap-pitch", "48"],
    ["ir", "--pdn", "bs", "--tap-pitch", "50"],
    ["cluster", "--netlist", "/nonexistent.net"],
    ["gen", "--lib", "/nonexistent.lib"],
    ["report", "--runs", "/nonexistent.csv"],
    ["sweep", "--config", "/nonexistent.cfg"],
])
def test_cli_config_errors_exit_2(tmp_path, argv, capsys):
    assert main(argv + ["--out", str(tmp_path)]) == 2
    assert "config error" in capsys.readouterr().err


def test_cli_sweep_from_config_file(tmp_path):
    cfg = tmp_path / "grid.cfg"
    cfg.write_text("design t n_inst=300 n_prim=20 d_avg=2.4 b_avg=0.5 t_avg=5 s_ratio=0.1\n"
                   "pdn fs\npdn fb pitch=48 scheme=column\nutil 0.8\nclkp 0.2\n")
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "s"), "--quiet"]) == 0
    rows = read_records(tmp_path / "s" / "runs.csv")
    assert [r.pdn_label for r in rows] == ["P_FS", "P_FB-48-Column"]


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "dtcopath", "sweep", "--config",
                           str(tmp_path / "missing.cfg")], capture_output=True, text=True)
    assert proc.returncode == 2
    proc = subprocess.run([sys.executable, "-m", "dtcopath", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "sweep" in proc.stdout
