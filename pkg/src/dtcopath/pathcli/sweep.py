"""Grid sweeps with append-only, resumable CSV persistence."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from pathlib import Path

from .config import DesignSpec, ExperimentConfig, resolve_lib
from .pipeline import kth_point, pdn_fields, regularize, run_point
from .records import RunRecord, format_row, header_line, read_records


@lru_cache(maxsize=16)
def _design(spec: DesignSpec, lib_name: str):
    lib, tech = resolve_lib(lib_name)
    return spec.load(lib), lib, tech


@lru_cache(maxsize=16)
def _regularized(spec: DesignSpec, lib_name: str, how: str):
    h, lib, _ = _design(spec, lib_name)
    return regularize(h, lib, how)


def run_one(point, mode: str = "ppac", activity: float = 0.2, refine: int = 0) -> RunRecord:
    """Run one grid point; any failure becomes an error-tagged row."""
    spec, lib_name, how, pdn, util, clkp, seed = point
    try:
        h, lib, tech = _design(spec, lib_name)
        reg = _regularized(spec, lib_name, how)
        if mode == "kth":
            return kth_point(h, lib, tech, pdn, util, seed, design=spec.name, library=lib_name,
                             reg=reg, refine=refine)
        return run_point(h, lib, tech, pdn, util, clkp, seed, design=spec.name,
                         library=lib_name, activity=activity, reg=reg)
    except Exception as e:   # rows carry their own failure
        msg = " ".join(f"{type(e).__name__}: {e}".split())
        return RunRecord(spec.name, lib_name, util=util, clkp_ns=clkp, seed=seed,
                         regularization=how, mode=mode, error=msg, **pdn_fields(pdn))


def _point_key(point, mode):
    spec, lib_name, how, pdn, util, clkp, seed = point
    probe = RunRecord(spec.name, lib_name, util=util, clkp_ns=clkp, seed=seed,
                      regularization=how, mode=mode, **pdn_fields(pdn))
    return probe.key


def _trim_partial(path: Path) -> None:
    """Drop a trailing partial line left by an interrupted write."""
    data = path.read_bytes()
    if data and not data.endswith(b"\n"):
        cut = data.rfind(b"\n") + 1
        with open(path, "r+b") as f:
            f.truncate(cut)


def load_done(path) -> list[RunRecord]:
    path = Path(path)
    if not path.exists() or path.stat().st_size == 0:
        return []
    _trim_partial(path)
    return read_records(path)


def run_sweep(cfg: ExperimentConfig, out_csv=None, workers: int | None = None,
              progress=None) -> list[RunRecord]:
    """Run every grid point not already persisted in ``out_csv``.

    Rows are appended in grid order by this process alone, so an
    interrupted sweep resumes to the same file an uninterrupted one
    writes. Returns all rows of the grid, in grid order.
    """
    points = cfg.points()
    keys = [_point_key(p, cfg.mode) for p in points]
    done = {}
    out = Path(out_csv) if out_csv is not None else None
    if out is not None:
        for rec in load_done(out):
            done[rec.key] = rec
        stray = set(done) - set(keys)
        if stray:
            raise ValueError(f"{out} holds rows outside this grid, e.g. {sorted(stray, key=str)[0]}")
        if not out.exists() or out.stat().st_size == 0:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(header_line())
    todo = [p for p, k in zip(points, keys) if k not in done]
    workers = workers or cfg.workers
    args = (cfg.mode, cfg.activity, cfg.refine)

    def record(rec):
        done[rec.key] = rec
        if out is not None:
            with open(out, "a", newline="") as f:
                f.write(format_row(rec))
                f.flush()
                os.fsync(f.fileno())
        if progress is not None:
            progress(rec)

    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(workers) as ex:
            for rec in ex.map(run_one, todo, *[[a] * len(todo) for a in args]):
                record(rec)
    else:
        for p in todo:
            record(run_one(p, *args))
    return [done[k] for k in keys]

