"""Monte Carlo plumbing: per-replication seeds, trial records, summaries, worker pool.

Every replication owns a stream seeded from
``(master_seed, experiment id, n, replication)``; results therefore do not
depend on how replications are spread over workers.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Callable, Iterable, Sequence, TextIO

import numpy as np

from .errors import ValidationError

__all__ = [
    "CSV_COLUMNS",
    "TrialRecord",
    "SummaryStats",
    "derive_seed",
    "run_trials",
    "write_records_csv",
    "read_records_csv",
    "records_to_csv",
]

CSV_COLUMNS = ("n", "rep", "d", "psi0", "sketch_tree_cost", "direct_cost", "analytic_limit",
               "experiment", "seed", "wall_ms")
_INT_COLUMNS = {"n", "rep", "d", "seed"}
_STR_COLUMNS = {"experiment"}


def _experiment_key(experiment: str) -> int:
    return int.from_bytes(hashlib.sha256(experiment.encode("utf-8")).digest()[:8], "little")


def derive_seed(master_seed: int, experiment: str, n: int, rep: int) -> int:
    """64-bit seed for one replication, a hash of all four coordinates."""
    if master_seed < 0:
        raise ValidationError(f"master seed must be >= 0, got {master_seed}")
    ss = np.random.SeedSequence(entropy=int(master_seed),
                                spawn_key=(_experiment_key(experiment), int(n), int(rep)))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass
class TrialRecord:
    experiment: str
    n: int
    rep: int
    seed: int
    d: int | None = None
    psi0: float | None = None
    sketch_tree_cost: float | None = None
    direct_cost: float | None = None
    analytic_limit: float | None = None
    wall_ms: float | None = None

    @property
    def key(self) -> tuple[str, int, int]:
        return (self.experiment, self.n, self.rep)


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    sd: float
    half_width: float
    count: int

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "SummaryStats":
        vals = [float(v) for v in values]
        if not vals:
            raise ValidationError("cannot summarize zero values")
        mean = statistics.fmean(vals)
        # a single value has no spread estimate; report 0 rather than NaN
        sd = statistics.stdev(vals, xbar=mean) if len(vals) > 1 else 0.0
        return cls(mean, sd, 1.96 * sd / math.sqrt(len(vals)), len(vals))

    def to_json(self) -> dict:
        return asdict(self)


def run_trials(fn: Callable, tasks: Sequence[tuple], workers: int = 1) -> list:
    """Apply ``fn(*task)`` to every task, optionally in a process pool.

    Output order follows ``tasks`` regardless of completion order.
    """
    if workers < 1:
        raise ValidationError(f"workers must be >= 1, got {workers}")
    if workers == 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *t) for t in tasks]
        return [f.result() for f in futures]


# CSV ------------------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_records_csv(records: Iterable[TrialRecord], fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow([_fmt(getattr(rec, c)) for c in CSV_COLUMNS])


def records_to_csv(records: Iterable[TrialRecord]) -> str:
    buf = io.StringIO()
    write_records_csv(records, buf)
    return buf.getvalue()


def read_records_csv(fh: TextIO) -> list[TrialRecord]:
    reader = csv.DictReader(fh)
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValidationError(f"unexpected CSV header {reader.fieldnames}")
    names = {f.name for f in fields(TrialRecord)}
    out = []
    for row in reader:
        kwargs = {}
        for col in names:
            raw = row[col]
            if col in _STR_COLUMNS:
                kwargs[col] = raw
            elif raw == "":
                kwargs[col] = None
            elif col in _INT_COLUMNS:
                kwargs[col] = int(raw)
            else:
                kwargs[col] = float(raw)
        out.append(TrialRecord(**kwargs))
    return out
