"""Flat experiment-record schema shared by the CLI, the service and plots.

CSV header (fixed): topology,protocol,scale,n,target,method,value,stderr,
seed,horizon,reps. ``value`` is a non-negative float or the literal token
"inf"; optional fields are blank when the method does not produce them
(exact/reduced: no stderr/seed/horizon/reps; reference-curve: value only).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import List, Optional

CSV_HEADER = [
    "topology", "protocol", "scale", "n", "target", "method",
    "value", "stderr", "seed", "horizon", "reps",
]

METHODS = {"exact", "reduced", "simulated", "bound-lower", "bound-upper", "reference-curve"}


@dataclass(frozen=True)
class ExperimentRecord:
    topology: str
    protocol: str
    scale: float
    n: int
    target: str
    method: str
    value: float
    stderr: Optional[float] = None
    seed: Optional[int] = None
    horizon: Optional[float] = None
    reps: Optional[int] = None

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not math.isinf(self.value) and self.value < 0:
            raise ValueError(f"negative age value {self.value}")

    def to_row(self) -> List[str]:
        def fmt(x) -> str:
            if x is None:
                return ""
            if isinstance(x, float):
                return "inf" if math.isinf(x) else repr(x)
            return str(x)

        return [
            self.topology, self.protocol, fmt(self.scale), str(self.n),
            self.target, self.method, fmt(self.value), fmt(self.stderr),
            fmt(self.seed), fmt(self.horizon), fmt(self.reps),
        ]

    @staticmethod
    def from_row(row: List[str]) -> "ExperimentRecord":
        if len(row) != len(CSV_HEADER):
            raise ValueError(f"expected {len(CSV_HEADER)} columns, got {len(row)}")
        def opt(s: str, conv):
            return conv(s) if s != "" else None

        return ExperimentRecord(
            topology=row[0],
            protocol=row[1],
            scale=float(row[2]),
            n=int(row[3]),
            target=row[4],
            method=row[5],
            value=math.inf if row[6] == "inf" else float(row[6]),
            stderr=opt(row[7], float),
            seed=opt(row[8], int),
            horizon=opt(row[9], float),
            reps=opt(row[10], int),
        )

    def to_json(self) -> dict:
        d = asdict(self)
        if math.isinf(self.value):
            d["value"] = "inf"
        return d

    @staticmethod
    def from_json(d: dict) -> "ExperimentRecord":
        d = dict(d)
        if d.get("value") == "inf":
            d["value"] = math.inf
        return ExperimentRecord(**d)


def sort_records(records: List[ExperimentRecord]) -> List[ExperimentRecord]:
    """Deterministic emission order regardless of completion order."""
    return sorted(
        records,
        key=lambda r: (r.topology, r.protocol, r.n, r.target, r.method, r.scale),
    )


def write_csv(records: List[ExperimentRecord], path_or_file) -> None:
    if isinstance(path_or_file, (str, bytes)):
        with open(path_or_file, "w", newline="") as f:
            _write(records, f)
    else:
        _write(records, path_or_file)


def _write(records: List[ExperimentRecord], f) -> None:
    w = csv.writer(f)
    w.writerow(CSV_HEADER)
    for r in sort_records(records):
        w.writerow(r.to_row())


def read_csv(path_or_file) -> List[ExperimentRecord]:
    if isinstance(path_or_file, (str, bytes)):
        with open(path_or_file, newline="") as f:
            return _read(f)
    return _read(path_or_file)


def _read(f) -> List[ExperimentRecord]:
    rows = list(csv.reader(f))
    if not rows or rows[0] != CSV_HEADER:
        raise ValueError(f"CSV header mismatch: expected {CSV_HEADER}")
    return [ExperimentRecord.from_row(r) for r in rows[1:]]


def records_to_csv_text(records: List[ExperimentRecord]) -> str:
    buf = io.StringIO()
    _write(records, buf)
    return buf.getvalue()
