"""Experiment commands behind the ``mst-sketch`` CLI.

Each ``cmd_*`` takes a :class:`RunConfig`, does the work, writes its primary
output (and raw trial records when asked) and returns the in-memory result.
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
import sys
import time
from dataclasses import dataclass, fields, replace
from typing import Sequence

import numpy as np

from .boundary import METHODS, WeightSample, estimate_psi0, parse_fhat
from .costs import (CostSpec, format_phi1, format_phi2, limit_value, parse_phi1, parse_phi2)
from .distributions import (ColorModel, density_at_zero, format_model, parse_model,
                            sample_coloring)
from .errors import PreconditionError, SizeLimitError, ValidationError
from .graph import new_complete, read_edge_list
from .harness import SummaryStats, TrialRecord, derive_seed, run_trials, write_records_csv
from .sketch import (DEFAULT_DIRECT_CAP, DEFAULT_SUBSAMPLE_CAP, EstimateReport, SketchConfig,
                     consistency_experiment, estimate_avcost, estimate_from_graph,
                     format_schedule, observe_weights, parse_schedule)
from .spanning_tree import phi_mst

__all__ = [
    "COMMANDS",
    "RunConfig",
    "cmd_frieze",
    "cmd_estimate",
    "cmd_convergence",
    "cmd_boundary",
    "cmd_bench",
    "frieze_trial",
    "boundary_trial",
]

COMMANDS = ("frieze", "estimate", "convergence", "boundary", "bench")
_DEFAULT_REPS = {"frieze": 30, "convergence": 30, "boundary": 50, "bench": 1, "estimate": 1}


@dataclass
class RunConfig:
    command: str
    model: str = "uniform:0,1"
    phi1: str = "identity"
    phi2: str = "zero"
    schedule: str = "sqrt"
    n: int | None = None
    n_grid: list[int] | None = None
    m_grid: list[int] | None = None
    reps: int | None = None
    seed: int = 0
    workers: int = 1
    psi0: str | None = None
    fhat: str = "bootstrap"
    bandwidth: str = "auto"
    cap: int = DEFAULT_DIRECT_CAP
    subsample_cap: int = DEFAULT_SUBSAMPLE_CAP
    auxiliary: str = "complete"
    colors: str | None = None
    input: str | None = None
    out: str | None = None
    records: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if self.reps is None:
            self.reps = _DEFAULT_REPS[self.command]
        if self.reps < 1:
            raise ValidationError(f"reps must be >= 1, got {self.reps}")
        if self.workers < 1:
            raise ValidationError(f"workers must be >= 1, got {self.workers}")
        if self.psi0 is not None and self.psi0 not in METHODS:
            raise ValidationError(f"psi0 must be one of {METHODS}, got {self.psi0!r}")

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown config keys {sorted(unknown)}")
        return cls(**data)

    # parsed views ---------------------------------------------------------------

    def weight_model(self):
        return parse_model(self.model)

    def cost_spec(self) -> CostSpec:
        return CostSpec(parse_phi1(self.phi1), parse_phi2(self.phi2))

    def bandwidth_value(self):
        if self.bandwidth == "auto":
            return "auto"
        try:
            return float(self.bandwidth)
        except ValueError:
            raise ValidationError(f"bandwidth must be 'auto' or a number, got {self.bandwidth!r}") from None

    def sketch_config(self) -> SketchConfig:
        kind, param = parse_fhat(self.fhat)
        return SketchConfig(schedule=parse_schedule(self.schedule),
                            psi0_method=self.psi0 or "dq",
                            psi0_bandwidth=self.bandwidth_value(),
                            fhat_method=kind, fhat_param=param, cost=self.cost_spec(),
                            edge_subsample_cap=self.subsample_cap, auxiliary=self.auxiliary)

    def grid(self) -> list[int]:
        if self.n_grid:
            return list(self.n_grid)
        if self.n is not None:
            return [self.n]
        raise ValidationError(f"{self.command} needs --n or --n-grid")

    def normalized(self) -> "RunConfig":
        """Same config with every spec string in canonical form."""
        kind, param = parse_fhat(self.fhat)
        return replace(self, model=format_model(self.weight_model()),
                       phi1=format_phi1(parse_phi1(self.phi1)),
                       phi2=format_phi2(parse_phi2(self.phi2)),
                       schedule=format_schedule(parse_schedule(self.schedule)),
                       fhat=kind if param is None else f"{kind}:{param!r}")


def _emit(text: str, path: str | None, stream=None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        (stream or sys.stdout).write(text)


def _maybe_write_records(records: Sequence[TrialRecord], path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            write_records_csv(records, fh)


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise SizeLimitError(f"n={n} exceeds the direct-solve cap {cap} (raise it with --cap)")


# frieze ------------------------------------------------------------------------------

def frieze_trial(model_text: str, phi1_text: str, n: int, rep: int, seed: int) -> TrialRecord:
    model = parse_model(model_text)
    spec = CostSpec(parse_phi1(phi1_text))
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    g = new_complete(n, model.sample, rng)
    _, cost = phi_mst(g, spec)
    wall = (time.perf_counter() - start) * 1e3
    return TrialRecord("frieze", n, rep, seed, direct_cost=cost, wall_ms=wall)


def cmd_frieze(cfg: RunConfig) -> dict:
    """Direct phi-MST cost of random complete graphs against the analytic limit."""
    model = cfg.weight_model()
    spec = cfg.cost_spec()
    if not spec.edge_only:
        raise ValidationError("frieze checks the edge-only cost; use --phi2 zero")
    if cfg.n is None:
        raise ValidationError("frieze needs --n")
    _check_cap(cfg.n, cfg.cap)
    try:
        limit = limit_value(spec.phi1, density_at_zero(model))
    except PreconditionError as exc:
        print(f"warning: no analytic limit ({exc})", file=sys.stderr)
        limit = None
    tasks = [(cfg.model, cfg.phi1, cfg.n, r, derive_seed(cfg.seed, "frieze", cfg.n, r))
             for r in range(cfg.reps)]
    records = run_trials(frieze_trial, tasks, cfg.workers)
    for rec in records:
        rec.analytic_limit = limit
    stats = SummaryStats.from_values(r.direct_cost for r in records)
    summary = {"model": cfg.model, "phi1": cfg.phi1, "n": cfg.n, **stats.to_json(),
               "analytic_limit": limit,
               "deviation": None if limit is None else stats.mean - limit}
    _emit(json.dumps(summary, indent=2) + "\n", cfg.out)
    _maybe_write_records(records, cfg.records)
    return {"summary": summary, "records": records}


# estimate ----------------------------------------------------------------------------

def cmd_estimate(cfg: RunConfig) -> EstimateReport:
    """One pipeline run on an edge-list file or on a synthetic complete graph."""
    sk = cfg.sketch_config()
    spec = sk.cost
    if cfg.input:
        g = read_edge_list(cfg.input)
        if not spec.edge_only:
            raise ValidationError("edge-list files carry no colors; vertex costs need --colors with a synthetic model")
        rng = np.random.default_rng(derive_seed(cfg.seed, "estimate", g.n, 0))
        report = estimate_from_graph(sk, g, rng, direct_cap=cfg.cap)
    else:
        if cfg.n is None:
            raise ValidationError("estimate needs --input or --n")
        n = cfg.n
        model = cfg.weight_model()
        rng = np.random.default_rng(derive_seed(cfg.seed, "estimate", n, 0))
        coloring = None
        if cfg.colors:
            probs = tuple(float(x) for x in cfg.colors.split(","))
            coloring = sample_coloring(ColorModel(probs), n, rng)
        if n <= cfg.cap:
            g = new_complete(n, model.sample, rng)
            report = estimate_from_graph(sk, g, rng, coloring=coloring, true_model=model,
                                         direct_cap=cfg.cap)
        else:
            # too big to materialize: i.i.d. edge weights, so draw the observed subsample directly
            m = n * (n - 1) // 2
            observed = WeightSample(model.sample(min(m, sk.edge_subsample_cap), rng))
            report = estimate_avcost(sk, observed, coloring, n, model, rng)
    _emit(report.dumps() + "\n", cfg.out)
    return report


# convergence -------------------------------------------------------------------------

def _consistency_table_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "d", "reps", "mean_abs_sketch_direct", "mean_abs_sketch_limit", "mean_abs_part1"])
    for r in rows:
        w.writerow([r.n, r.d, r.reps, repr(r.mean_abs_sketch_direct),
                    "" if r.mean_abs_sketch_limit is None else repr(r.mean_abs_sketch_limit),
                    repr(r.mean_abs_part1)])
    return buf.getvalue()


def cmd_convergence(cfg: RunConfig) -> dict:
    """Sketch vs direct MST cost across ``n_grid``; trial records CSV is the primary output."""
    sk = cfg.sketch_config()
    grid = cfg.grid()
    for n in grid:
        _check_cap(n, cfg.cap)
    rows, records = consistency_experiment(sk, cfg.weight_model(), grid, cfg.reps, cfg.seed,
                                           workers=cfg.workers, direct_cap=cfg.cap)
    buf = io.StringIO()
    write_records_csv(records, buf)
    _emit(buf.getvalue(), cfg.out)
    _emit(_consistency_table_csv(rows), None, sys.stdout if cfg.out else sys.stderr)
    return {"table": rows, "records": records}


# boundary ----------------------------------------------------------------------------

def boundary_trial(model_text: str, m: int, rep: int, seed: int, methods: tuple[str, ...],
                   bandwidth) -> list[TrialRecord]:
    """Estimate F'(0) by each method on one shared sample of size ``m``."""
    model = parse_model(model_text)
    rng = np.random.default_rng(seed)
    sample = WeightSample(model.sample(m, rng))
    out = []
    for method in methods:
        start = time.perf_counter()
        est = estimate_psi0(sample, method, bandwidth)
        wall = (time.perf_counter() - start) * 1e3
        out.append(TrialRecord(f"boundary-{method}", m, rep, seed, psi0=est.psi0, wall_ms=wall))
    return out


def cmd_boundary(cfg: RunConfig) -> dict:
    """Boundary-estimator study: mean psi0 and mean |psi0 - F'(0)| per method and sample size."""
    model = cfg.weight_model()
    target = density_at_zero(model)
    grid = list(cfg.m_grid) if cfg.m_grid else cfg.grid()
    methods = (cfg.psi0,) if cfg.psi0 else METHODS
    bw = cfg.bandwidth_value()
    tasks = [(cfg.model, m, r, derive_seed(cfg.seed, "boundary", m, r), methods, bw)
             for m in grid for r in range(cfg.reps)]
    records = [rec for batch in run_trials(boundary_trial, tasks, cfg.workers) for rec in batch]
    table = []
    for m in grid:
        row = {"m": m, "reps": cfg.reps, "true_fprime0": target}
        for method in methods:
            psi = [r.psi0 for r in records if r.n == m and r.experiment == f"boundary-{method}"]
            row[f"{method}_mean_psi0"] = math.fsum(psi) / len(psi)
            row[f"{method}_mean_abs_err"] = math.fsum(abs(p - target) for p in psi) / len(psi)
        table.append(row)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = list(table[0]) if table else ["m", "reps", "true_fprime0"]
    w.writerow(header)
    for row in table:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row.values()])
    _emit(buf.getvalue(), cfg.out)
    _maybe_write_records(sorted(records, key=lambda r: (r.experiment, r.n, r.rep)), cfg.records)
    return {"table": table, "records": records}


# bench -------------------------------------------------------------------------------

def cmd_bench(cfg: RunConfig) -> list[dict]:
    """Wall time of the direct phi-MST against the sketch pipeline, per n. Always sequential."""
    model = cfg.weight_model()
    sk = cfg.sketch_config()
    rows = []
    for n in cfg.grid():
        _check_cap(n, cfg.cap)
        direct_ms, sketch_ms, direct_cost, sketch_cost = [], [], [], []
        for r in range(cfg.reps):
            rng = np.random.default_rng(derive_seed(cfg.seed, "bench", n, r))
            g = new_complete(n, model.sample, rng)
            t0 = time.perf_counter()
            _, cost = phi_mst(g, sk.cost)
            t1 = time.perf_counter()
            observed = observe_weights(g, sk.edge_subsample_cap, rng)
            report = estimate_avcost(sk, observed, None, n, None, rng)
            t2 = time.perf_counter()
            direct_ms.append((t1 - t0) * 1e3)
            sketch_ms.append((t2 - t1) * 1e3)
            direct_cost.append(cost)
            sketch_cost.append(report.sketch_tree_cost)
        d_ms, s_ms = statistics.median(direct_ms), statistics.median(sketch_ms)
        rows.append({"n": n, "direct_ms": d_ms, "sketch_ms": s_ms,
                     "ratio": d_ms / s_ms if s_ms > 0 else math.inf,
                     "direct_cost": math.fsum(direct_cost) / len(direct_cost),
                     "sketch_tree_cost": math.fsum(sketch_cost) / len(sketch_cost)})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "direct_ms", "sketch_ms", "ratio", "direct_cost", "sketch_tree_cost"])
    for row in rows:
        w.writerow([row["n"], f"{row['direct_ms']:.3f}", f"{row['sketch_ms']:.3f}",
                    f"{row['ratio']:.3f}", repr(row["direct_cost"]), repr(row["sketch_tree_cost"])])
    _emit(buf.getvalue(), cfg.out)
    return rows
