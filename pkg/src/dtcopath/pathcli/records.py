"""Run records and their fixed-header CSV form."""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, fields, replace

from .metrics import valid as _valid


@dataclass(frozen=True)
class RunRecord:
    # grid point
    design: str
    library: str
    pdn: str
    i_pitch: int | None
    i_scheme: str | None
    util: float
    clkp_ns: float | None
    seed: int
    regularization: str = "clustered"
    mode: str = "ppac"
    # outputs (None until the pipeline completes)
    n_inst: int | None = None
    n_nets: int | None = None
    n_prim: int | None = None
    avg_fanout: float | None = None
    n_seq: int | None = None
    wirelength: float | None = None          # um
    area_um2: float | None = None
    achieved_util: float | None = None
    drc_proxy: int | None = None
    wns_ns: float | None = None
    tns_ns: float | None = None
    failing_endpoints: int | None = None
    total_power_mw: float | None = None
    fmax_ghz: float | None = None
    edp: float | None = None
    eiv_p997_v: float | None = None
    worst_vdrop_mv: float | None = None
    vop_v: float | None = None
    kth: float | None = None
    valid: bool | None = None
    error: str = ""

    @property
    def key(self) -> tuple:
        return (self.design, self.library, self.regularization, self.pdn_label,
                self.util, self.clkp_ns, self.seed, self.mode)

    @property
    def pdn_label(self) -> str:
        if self.i_pitch is None:
            return self.pdn
        return f"{self.pdn}-{self.i_pitch}-{self.i_scheme}"

    @property
    def completed(self) -> bool:
        return not self.error

    def with_validity(self) -> RunRecord:
        return replace(self, valid=_valid(self))


FIELDS = tuple(f.name for f in fields(RunRecord))
HEADER = FIELDS
_INT = {"i_pitch", "seed", "n_inst", "n_nets", "n_prim", "n_seq", "drc_proxy", "failing_endpoints"}
_STR = {"design", "library", "pdn", "i_scheme", "regularization", "mode", "error"}
_BOOL = {"valid"}


def _fmt(name, v) -> str:
    if v is None:
        return ""
    if name in _BOOL:
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse(name, s: str):
    if name == "error":
        return s
    if s == "":
        return None
    if name in _STR:
        return s
    if name in _INT:
        return int(s)
    if name in _BOOL:
        return s == "1"
    return float(s)


def to_row(rec: RunRecord) -> list[str]:
    d = asdict(rec)
    return [_fmt(n, d[n]) for n in FIELDS]


def from_row(row) -> RunRecord:
    if isinstance(row, dict):
        row = [row[n] for n in FIELDS]
    if len(row) != len(FIELDS):
        raise ValueError(f"expected {len(FIELDS)} columns, got {len(row)}")
    return RunRecord(**{n: _parse(n, s) for n, s in zip(FIELDS, row)})


def format_row(rec: RunRecord) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerow(to_row(rec))
    return buf.getvalue()


def header_line() -> str:
    return ",".join(HEADER) + "\n"


def read_records(path) -> list[RunRecord]:
    with open(path, newline="") as f:
        r = csv.reader(f)
        head = next(r, None)
        if head is None:
            return []
        if tuple(head) != HEADER:
            raise ValueError(f"{path}: unexpected header")
        return [from_row(row) for row in r if row]


def write_records(path, recs) -> None:
    with open(path, "w", newline="") as f:
        f.write(header_line())
        for rec in recs:
            f.write(format_row(rec))
