"""Estimate the per-vertex phi-MST cost of a big random graph from a small sketch.

Pipeline: estimate the color law and the weight law (plus its slope at 0)
from the observed graph, draw a complete auxiliary graph on d(n) vertices from
those estimates, solve its phi-MST, and divide the cost by d(n).
"""

from __future__ import annotations

import dataclasses
import json
import logging
import math
import time
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .boundary import BoundaryEstimate, WeightSample, estimate_psi0, make_fhat, resample
from .costs import CostSpec, limit_value
from .distributions import (ColorModel, VertexColoring, WeightModel, density_at_zero,
                            empirical_pmf, sample_coloring)
from .errors import (DegenerateSampleError, NoSpanningTreeError, PreconditionError, SizeLimitError,
                     ValidationError)
from .graph import WeightedGraph, is_connected, new_complete
from .harness import TrialRecord, derive_seed, run_trials
from .spanning_tree import SpanningTree, phi_mst

log = logging.getLogger(__name__)

__all__ = [
    "SqrtN",
    "LogSquared",
    "Explicit",
    "SketchSchedule",
    "SketchConfig",
    "EstimateReport",
    "SketchRun",
    "ConsistencyRow",
    "schedule_d",
    "parse_schedule",
    "format_schedule",
    "observe_weights",
    "build_auxiliary",
    "run_sketch",
    "estimate_avcost",
    "estimate_from_graph",
    "consistency_trial",
    "consistency_experiment",
    "summarize_consistency",
]

DEFAULT_DIRECT_CAP = 20_000
DEFAULT_SUBSAMPLE_CAP = 1_000_000


@dataclass(frozen=True)
class SqrtN:
    def __call__(self, n: int) -> int:
        return math.isqrt(n - 1) + 1  # exact ceil(sqrt(n)) for n >= 1


@dataclass(frozen=True)
class LogSquared:
    def __call__(self, n: int) -> int:
        return math.ceil(math.log(n) ** 2)


@dataclass(frozen=True)
class Explicit:
    table: tuple[tuple[int, int], ...]

    def __call__(self, n: int) -> int:
        for key, d in self.table:
            if key == n:
                return d
        raise ValidationError(f"explicit schedule has no entry for n={n}")


SketchSchedule = Union[SqrtN, LogSquared, Explicit]


def schedule_d(s: SketchSchedule, n: int) -> int:
    """Auxiliary size d(n), clamped to ``2 <= d <= n``."""
    if n < 4:
        raise ValidationError(f"sketching needs a source with n >= 4, got n={n}")
    return min(max(s(n), 2), n)


def parse_schedule(text: str) -> SketchSchedule:
    """``sqrt | logsq | explicit:n1=d1,n2=d2,...``"""
    name, _, rest = text.strip().partition(":")
    if name == "sqrt" and not rest:
        return SqrtN()
    if name == "logsq" and not rest:
        return LogSquared()
    if name == "explicit" and rest:
        try:
            pairs = tuple((int(a), int(b)) for a, b in (p.split("=") for p in rest.split(",")))
        except ValueError:
            raise ValidationError(f"bad explicit schedule {text!r}") from None
        return Explicit(pairs)
    raise ValidationError(f"unknown schedule {text!r}")


def format_schedule(s: SketchSchedule) -> str:
    if isinstance(s, SqrtN):
        return "sqrt"
    if isinstance(s, LogSquared):
        return "logsq"
    return "explicit:" + ",".join(f"{a}={b}" for a, b in s.table)


@dataclass(frozen=True)
class SketchConfig:
    schedule: SketchSchedule = SqrtN()
    psi0_method: str = "dq"
    psi0_bandwidth: Union[str, float] = "auto"
    fhat_method: str = "bootstrap"
    fhat_param: float | None = None
    cost: CostSpec = CostSpec()
    edge_subsample_cap: int = DEFAULT_SUBSAMPLE_CAP
    color_model_mode: str = "estimate"
    # "complete" follows the method; "erdos_renyi" matches the source edge density (experimental)
    auxiliary: str = "complete"

    def __post_init__(self):
        if self.edge_subsample_cap < 1000:
            raise ValidationError(f"edge_subsample_cap must be >= 1000, got {self.edge_subsample_cap}")
        if self.color_model_mode not in ("estimate", "none"):
            raise ValidationError("color_model_mode must be 'estimate' or 'none'")
        if self.auxiliary not in ("complete", "erdos_renyi"):
            raise ValidationError(f"unknown auxiliary topology {self.auxiliary!r}")


@dataclass
class EstimateReport:
    n: int
    d: int
    avcost_hat: float
    sketch_tree_cost: float
    psi0: BoundaryEstimate | None
    analytic_limit: float | None = None
    direct_cost: float | None = None
    color_pmf: list[float] | None = None

    def to_json(self) -> dict:
        out = dataclasses.asdict(self)
        out["psi0"] = None if self.psi0 is None else self.psi0.to_json()
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: dict) -> "EstimateReport":
        data = dict(data)
        if data.get("psi0") is not None:
            data["psi0"] = BoundaryEstimate(**data["psi0"])
        return cls(**data)


@dataclass
class SketchRun:
    """Everything one pass of the pipeline produced, before packaging as a report."""

    d: int
    auxiliary: WeightedGraph
    tree: SpanningTree
    cost: float
    psi0: BoundaryEstimate | None
    color_pmf: ColorModel | None = None
    auxiliary_coloring: VertexColoring | None = None


def observe_weights(g: WeightedGraph, cap: int, rng: np.random.Generator) -> WeightSample:
    """All edge weights of ``g``, or a uniform subsample of ``cap`` of them without replacement."""
    m = g.num_edges
    if m <= cap:
        return WeightSample(g.weights)
    if 4 * cap > m:
        idx = rng.choice(m, size=cap, replace=False)
    else:
        # draw with replacement, drop repeats, top up; the result is a uniform cap-subset
        idx = np.unique(rng.integers(0, m, size=cap))
        while idx.size < cap:
            idx = np.unique(np.concatenate([idx, rng.integers(0, m, size=cap - idx.size)]))
    return WeightSample(g.weights[idx])


def build_auxiliary(cfg: SketchConfig, observed_weights: WeightSample, n: int,
                    rng: np.random.Generator, edge_density: float = 1.0) -> WeightedGraph:
    """Auxiliary graph on d(n) vertices with weights drawn from the configured F-hat."""
    if observed_weights.m == 0:
        raise ValidationError("no observed weights")
    d = schedule_d(cfg.schedule, n)
    fhat = make_fhat(cfg.fhat_method, observed_weights, cfg.fhat_param)
    draw = lambda count, r: resample(fhat, count, r)
    if cfg.auxiliary == "complete" or edge_density >= 1.0:
        return new_complete(d, draw, rng)
    keep = np.flatnonzero(rng.random(d * (d - 1) // 2) < edge_density)
    base = WeightedGraph(d, np.zeros(d * (d - 1) // 2), None, None, True)
    u, v = base.endpoints(keep)
    w = draw(keep.size, rng)
    return WeightedGraph(d, np.asarray(w, dtype=np.float64), u, v, keep.size == d * (d - 1) // 2)


def run_sketch(cfg: SketchConfig, observed_weights: WeightSample, n: int,
               rng: np.random.Generator, coloring: VertexColoring | None = None,
               edge_density: float = 1.0) -> SketchRun:
    d = schedule_d(cfg.schedule, n)
    pmf = None
    if coloring is not None and cfg.color_model_mode == "estimate":
        pmf = empirical_pmf(coloring)
    try:
        psi0 = estimate_psi0(observed_weights, cfg.psi0_method, cfg.psi0_bandwidth)
    except DegenerateSampleError as exc:
        # psi0 is a diagnostic here; the tree cost does not depend on it
        log.warning("boundary estimate unavailable: %s", exc)
        psi0 = None
    aux = build_auxiliary(cfg, observed_weights, n, rng, edge_density)
    aux_colors = sample_coloring(pmf, d, rng) if pmf is not None else None
    if not cfg.cost.edge_only and aux_colors is None:
        raise ValidationError("vertex cost needs a source coloring to estimate the color law")
    tree, cost = phi_mst(aux, cfg.cost, aux_colors)
    return SketchRun(d, aux, tree, cost, psi0, pmf, aux_colors)


def _analytic_limit(cfg: SketchConfig, true_model: WeightModel | None) -> float | None:
    if true_model is None or not cfg.cost.edge_only:
        return None
    try:
        return limit_value(cfg.cost.phi1, density_at_zero(true_model))
    except PreconditionError as exc:
        log.warning("no analytic limit for %r: %s", true_model, exc)
        return None


def estimate_avcost(cfg: SketchConfig, observed_weights: WeightSample,
                    coloring: VertexColoring | None, n: int,
                    true_model: WeightModel | None, rng: np.random.Generator,
                    direct_cost: float | None = None, edge_density: float = 1.0) -> EstimateReport:
    """One full pass of the sketch estimator.

    ``true_model`` is only used to attach the analytic limit to the report;
    the estimate itself never looks at it.
    """
    run = run_sketch(cfg, observed_weights, n, rng, coloring, edge_density)
    return EstimateReport(
        n=n,
        d=run.d,
        avcost_hat=run.cost / run.d,
        sketch_tree_cost=run.cost,
        psi0=run.psi0,
        analytic_limit=_analytic_limit(cfg, true_model),
        direct_cost=direct_cost,
        color_pmf=list(run.color_pmf.probs) if run.color_pmf is not None else None,
    )


def estimate_from_graph(cfg: SketchConfig, g: WeightedGraph, rng: np.random.Generator,
                        coloring: VertexColoring | None = None,
                        true_model: WeightModel | None = None,
                        direct_cap: int = DEFAULT_DIRECT_CAP) -> EstimateReport:
    """Sketch estimate for a materialized source graph, plus its direct cost when n <= direct_cap."""
    if not is_connected(g):
        raise NoSpanningTreeError(f"source graph (n={g.n}, {g.num_edges} edges) is disconnected")
    direct = None
    if g.n <= direct_cap and (cfg.cost.edge_only or g.n <= 8):
        direct = phi_mst(g, cfg.cost, coloring)[1]
    observed = observe_weights(g, cfg.edge_subsample_cap, rng)
    density = 1.0 if g.complete else g.num_edges / (g.n * (g.n - 1) / 2)
    return estimate_avcost(cfg, observed, coloring, g.n, true_model, rng, direct, density)


# Monte Carlo consistency -------------------------------------------------------------

@dataclass(frozen=True)
class ConsistencyRow:
    n: int
    d: int
    reps: int
    mean_abs_sketch_direct: float
    mean_abs_sketch_limit: float | None
    mean_abs_part1: float


def consistency_trial(cfg: SketchConfig, true_model: WeightModel, n: int, rep: int, seed: int,
                      experiment: str = "convergence") -> TrialRecord:
    """One replication: fresh complete source graph, direct phi-MST, sketch estimate."""
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    g = new_complete(n, true_model.sample, rng)
    report = estimate_from_graph(cfg, g, rng, true_model=true_model, direct_cap=n)
    wall = (time.perf_counter() - start) * 1e3
    return TrialRecord(experiment, n, rep, seed, d=report.d,
                       psi0=None if report.psi0 is None else report.psi0.psi0,
                       sketch_tree_cost=report.sketch_tree_cost, direct_cost=report.direct_cost,
                       analytic_limit=report.analytic_limit, wall_ms=wall)


def consistency_experiment(cfg: SketchConfig, true_model: WeightModel, n_grid: Sequence[int],
                           replications: int, rng: Union[np.random.Generator, int],
                           workers: int = 1, direct_cap: int = DEFAULT_DIRECT_CAP,
                           experiment: str = "convergence"
                           ) -> tuple[list[ConsistencyRow], list[TrialRecord]]:
    """Sketch-vs-direct MST cost over a grid of source sizes.

    ``rng`` may be a master seed or a Generator (one master seed is drawn from
    it). Returns the per-n table and the raw records sorted by (n, rep).
    """
    if replications <= 0:
        return [], []
    if max(n_grid) > direct_cap:
        raise SizeLimitError(f"n={max(n_grid)} exceeds the direct-solve cap {direct_cap}")
    master = int(rng.integers(0, 2**63)) if isinstance(rng, np.random.Generator) else int(rng)
    tasks = [(cfg, true_model, n, r, derive_seed(master, experiment, n, r), experiment)
             for n in n_grid for r in range(replications)]
    records = run_trials(consistency_trial, tasks, workers)
    records.sort(key=lambda rec: (rec.n, rec.rep))
    return summarize_consistency(records), records


def summarize_consistency(records: Sequence[TrialRecord]) -> list[ConsistencyRow]:
    rows = []
    for n in sorted({r.n for r in records}):
        group = [r for r in records if r.n == n]
        gap = [abs(r.sketch_tree_cost - r.direct_cost) for r in group]
        # part-1 gap: per-vertex estimate vs direct cost spread over all n vertices
        part1 = [abs(r.sketch_tree_cost / r.d - r.direct_cost / r.n) for r in group]
        lim = None
        if all(r.analytic_limit is not None for r in group):
            lim = math.fsum(abs(r.sketch_tree_cost - r.analytic_limit) for r in group) / len(group)
        rows.append(ConsistencyRow(n, group[0].d, len(group), math.fsum(gap) / len(group), lim,
                                   math.fsum(part1) / len(group)))
    return rows
