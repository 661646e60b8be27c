"""Tradeoff tables, Pareto marking, deltas against P_FS, and Kth rankings."""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from .records import RunRecord

REFERENCE_PDN = "P_FS"

# name -> (x field, x sense, y field, y sense); sense is +1 to maximize, -1 to minimize
TRADEOFFS = {
    "performance_power": ("fmax_ghz", 1, "total_power_mw", -1),
    "performance_area": ("fmax_ghz", 1, "area_um2", -1),
    "edp_area": ("area_um2", -1, "edp", -1),
    "ir_area": ("area_um2", -1, "eiv_p997_v", 1),
}
GROUP = ("design", "library", "regularization")
TRADEOFF_HEADER = ("design", "library", "regularization", "pdn", "util", "clkp_ns", "seed",
                   "x", "y", "pareto")
DELTA_HEADER = ("design", "library", "regularization", "tradeoff", "pdn", "x_field", "x_pdn",
                "x_ref", "y_field", "y_pdn", "y_ref", "delta", "delta_pct")
KTH_HEADER = ("design", "library", "regularization", "util", "rank", "pdn", "kth", "n_runs")
ORDER_HEADER = ("design", "library", "util", "regularization", "ordering", "same_as_first")


def _group(rec: RunRecord) -> tuple:
    return tuple(getattr(rec, g) for g in GROUP)


def dominates(a, b, sx: int, sy: int) -> bool:
    """``a`` is no worse than ``b`` on both axes and strictly better on one."""
    ax, ay, bx, by = sx * a[0], sy * a[1], sx * b[0], sy * b[1]
    return ax >= bx and ay >= by and (ax > bx or ay > by)


def pareto_mask(points, sx: int, sy: int) -> list[bool]:
    """Non-dominated flags by the O(n^2) scan."""
    return [not any(dominates(q, p, sx, sy) for q in points) for p in points]


def tradeoff_rows(rows, name: str) -> list[dict]:
    xf, sx, yf, sy = TRADEOFFS[name]
    good = [r for r in rows if r.valid and getattr(r, xf) is not None and getattr(r, yf) is not None]
    by_group = defaultdict(list)
    for r in good:
        by_group[_group(r)].append(r)
    out = []
    for g in sorted(by_group, key=str):
        rs = by_group[g]
        pts = [(getattr(r, xf), getattr(r, yf)) for r in rs]
        for r, (x, y), par in zip(rs, pts, pareto_mask(pts, sx, sy)):
            out.append({"design": r.design, "library": r.library,
                        "regularization": r.regularization, "pdn": r.pdn_label,
                        "util": r.util, "clkp_ns": r.clkp_ns, "seed": r.seed,
                        "x": x, "y": y, "pareto": par})
    return out


def _key(x: float) -> float:
    # x values that differ only by float noise count as equal
    return float(f"{x:.12g}")


def second_largest(values):
    vs = sorted(set(values), reverse=True)
    if not vs:
        return None
    return vs[1] if len(vs) > 1 else vs[0]


def point_at_second_largest(rs, xf, yf, sy):
    """(x, best y) at the second-largest x value the rows attain."""
    x_at = second_largest(_key(getattr(r, xf)) for r in rs)
    ys = [getattr(r, yf) for r in rs if _key(getattr(r, xf)) == x_at]
    return x_at, (max(ys) if sy > 0 else min(ys))


def delta_rows(rows, name: str, reference: str = REFERENCE_PDN) -> list[dict]:
    """y of each PDN minus y of the reference, each taken at the second-largest
    x value that configuration attains (its best y there)."""
    xf, _, yf, sy = TRADEOFFS[name]
    good = [r for r in rows if r.valid and getattr(r, xf) is not None and getattr(r, yf) is not None]
    by_group = defaultdict(lambda: defaultdict(list))
    for r in good:
        by_group[_group(r)][r.pdn_label].append(r)
    out = []
    for g in sorted(by_group, key=str):
        pdns = by_group[g]
        if reference not in pdns:
            continue
        x_r, y_r = point_at_second_largest(pdns[reference], xf, yf, sy)
        for label in sorted(pdns):
            if label == reference:
                continue
            x_p, y_p = point_at_second_largest(pdns[label], xf, yf, sy)
            d = y_p - y_r
            pct = 100.0 * d / abs(y_r) if y_r else None
            out.append(dict(zip(DELTA_HEADER, (*g, name, label, xf, x_p, x_r, yf, y_p, y_r, d, pct))))
    return out


def kth_rank_rows(rows) -> list[dict]:
    """Enablements sorted by ascending Kth (mean over seeds) per group and util.

    A sentinel Kth (no failure up to the last checkpoint) ranks last.
    """
    acc = defaultdict(list)
    for r in rows:
        if r.mode == "kth" and r.kth is not None and not r.error:
            acc[(*_group(r), r.util, r.pdn_label)].append(r.kth)
    by = defaultdict(list)
    for (*g, util, label), ks in acc.items():
        by[(*g, util)].append((sum(ks) / len(ks), label, len(ks)))
    out = []
    for key in sorted(by, key=str):
        for rank, (k, label, n) in enumerate(sorted(by[key], key=lambda t: (t[0], t[1])), 1):
            out.append(dict(zip(KTH_HEADER, (*key, rank, label, k, n))))
    return out


def ordering_rows(kth_rank) -> list[dict]:
    """Kth orderings under each regularization side by side (a report, not a check)."""
    orders = defaultdict(dict)
    for r in kth_rank:
        key = (r["design"], r["library"], r["util"])
        orders[key].setdefault(r["regularization"], []).append(r["pdn"])
    out = []
    for key in sorted(orders, key=str):
        regs = orders[key]
        first = None
        for reg in sorted(regs):
            o = " < ".join(regs[reg])
            first = o if first is None else first
            out.append(dict(zip(ORDER_HEADER, (*key, reg, o, o == first))))
    return out


@dataclass
class ReportBundle:
    tradeoffs: dict[str, list[dict]] = field(default_factory=dict)
    deltas: list[dict] = field(default_factory=list)
    kth_rank: list[dict] = field(default_factory=list)
    orderings: list[dict] = field(default_factory=list)
    paths: dict[str, Path] = field(default_factory=dict)

    def pareto(self, name: str) -> list[dict]:
        return [r for r in self.tradeoffs[name] if r["pareto"]]


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else ("inf" if v > 0 else "-inf")
    return str(v)


def _write(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_cell(r[h]) for h in header])


def emit_reports(rows, out_dir=None) -> ReportBundle:
    """Build every report from ``rows``; write CSVs when ``out_dir`` is given."""
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to report")
    b = ReportBundle()
    for name in TRADEOFFS:
        b.tradeoffs[name] = tradeoff_rows(rows, name)
        b.deltas.extend(delta_rows(rows, name))
    b.kth_rank = kth_rank_rows(rows)
    b.orderings = ordering_rows(b.kth_rank)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, trs in b.tradeoffs.items():
            b.paths[name] = out / f"tradeoff_{name}.csv"
            _write(b.paths[name], TRADEOFF_HEADER, trs)
        b.paths["deltas"] = out / "deltas_vs_fs.csv"
        _write(b.paths["deltas"], DELTA_HEADER, b.deltas)
        b.paths["kth_rank"] = out / "kth_rank.csv"
        _write(b.paths["kth_rank"], KTH_HEADER, b.kth_rank)
        b.paths["orderings"] = out / "kth_orderings.csv"
        _write(b.paths["orderings"], ORDER_HEADER, b.orderings)
    return b
