"""Estimating the edge-weight density at the boundary point 0, and resampling F-hat.

Two estimators converge to F'(0): the empirical-CDF difference quotient and
a reflected (mass-doubled) Epanechnikov kernel. The plain kernel estimate is
kept as a negative control: at a support boundary it sees only half the
kernel mass and converges to F'(0)/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .distributions import WeightModel, density_at_zero
from .errors import DegenerateSampleError, ValidationError

__all__ = [
    "METHODS",
    "WeightSample",
    "BoundaryEstimate",
    "Bootstrap",
    "SmoothedBootstrap",
    "LowerTailRescaled",
    "ResamplingModel",
    "epanechnikov",
    "difference_quotient_psi0",
    "reflection_kernel_psi0",
    "naive_kernel_psi0",
    "estimate_psi0",
    "resample",
    "boundary_convergence_study",
    "make_fhat",
    "parse_fhat",
]

METHODS = ("dq", "reflect", "naive")


@dataclass(frozen=True, eq=False)
class WeightSample:
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1:
            raise ValidationError("weight sample must be one-dimensional")
        if vals.size and vals.min() < 0:
            raise ValidationError("weight sample contains a negative value")

    @property
    def m(self) -> int:
        return int(self.values.shape[0])


@dataclass(frozen=True)
class BoundaryEstimate:
    psi0: float
    bandwidth: float
    method: str

    def to_json(self) -> dict:
        return {"psi0": self.psi0, "bandwidth": self.bandwidth, "method": self.method}


def epanechnikov(u):
    u = np.asarray(u, dtype=np.float64)
    return np.where(np.abs(u) <= 1.0, 0.75 * (1.0 - u * u), 0.0)


def _bandwidth(rule, m: int, exponent: float) -> float:
    if rule is None or rule == "auto":
        return float(m) ** exponent
    h = float(rule)
    if not h > 0:
        raise ValidationError(f"bandwidth must be > 0, got {rule!r}")
    return h


def _check(s: WeightSample) -> None:
    if s.m < 2:
        raise ValidationError(f"need at least 2 observations, got {s.m}")


def difference_quotient_psi0(s: WeightSample, bandwidth_rule="auto") -> BoundaryEstimate:
    """``F_emp(h) / h``, default ``h = m**-1/4``."""
    _check(s)
    h = _bandwidth(bandwidth_rule, s.m, -0.25)
    hits = int(np.count_nonzero(s.values <= h))
    if hits == 0:
        raise DegenerateSampleError(f"no observations in [0, {h:.4g}]")
    return BoundaryEstimate(hits / (s.m * h), h, "dq")


def _kernel_sum(s: WeightSample, h: float) -> float:
    near = s.values[s.values <= h]
    total = float(epanechnikov(near / h).sum())
    if total <= 0:
        raise DegenerateSampleError(f"no observations inside the kernel support [0, {h:.4g})")
    return total


def reflection_kernel_psi0(s: WeightSample, bandwidth_rule="auto") -> BoundaryEstimate:
    """Kernel estimate at 0 with mass doubling for the support boundary; default ``h = m**-1/5``."""
    _check(s)
    h = _bandwidth(bandwidth_rule, s.m, -0.2)
    return BoundaryEstimate(2.0 * _kernel_sum(s, h) / (s.m * h), h, "reflect")


def naive_kernel_psi0(s: WeightSample, bandwidth="auto") -> BoundaryEstimate:
    """Uncorrected kernel estimate at 0. Biased: tends to F'(0)/2."""
    _check(s)
    h = _bandwidth(bandwidth, s.m, -0.2)
    return BoundaryEstimate(_kernel_sum(s, h) / (s.m * h), h, "naive")


_ESTIMATORS = {
    "dq": difference_quotient_psi0,
    "reflect": reflection_kernel_psi0,
    "naive": naive_kernel_psi0,
}


def estimate_psi0(s: WeightSample, method: str = "dq", bandwidth="auto") -> BoundaryEstimate:
    try:
        fn = _ESTIMATORS[method]
    except KeyError:
        raise ValidationError(f"unknown psi0 method {method!r}; expected one of {METHODS}") from None
    return fn(s, bandwidth)


# resampling models ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Bootstrap:
    """Draw uniformly with replacement from the observed weights."""

    source: WeightSample


@dataclass(frozen=True, eq=False)
class SmoothedBootstrap:
    """Bootstrap draw plus Epanechnikov noise of width ``bandwidth``, folded at 0."""

    source: WeightSample
    bandwidth: float

    def __post_init__(self):
        if not self.bandwidth > 0:
            raise ValidationError(f"bandwidth must be > 0, got {self.bandwidth}")


@dataclass(frozen=True, eq=False)
class LowerTailRescaled:
    """Deliberately wrong F-hat that keeps the density at 0.

    Resamples only the lowest ``fraction`` of the observations and stretches
    them by ``1/fraction``; the slope at 0 is unchanged but the law away from 0
    is not (except for uniform data).
    """

    source: WeightSample
    fraction: float = 0.5
    _tail: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not 0 < self.fraction <= 1:
            raise ValidationError(f"fraction must lie in (0, 1], got {self.fraction}")
        vals = np.sort(self.source.values)
        keep = max(1, int(np.ceil(self.fraction * vals.size)))
        object.__setattr__(self, "_tail", vals[:keep] / self.fraction)


ResamplingModel = Union[Bootstrap, SmoothedBootstrap, LowerTailRescaled]


def _epanechnikov_noise(count: int, rng: np.random.Generator) -> np.ndarray:
    # median-of-three construction: pick U2 if |U3| is the largest, else U3
    u = rng.uniform(-1.0, 1.0, size=(3, count))
    a = np.abs(u)
    pick_u2 = (a[2] >= a[1]) & (a[2] >= a[0])
    return np.where(pick_u2, u[1], u[2])


def resample(model: ResamplingModel, count: int, rng: np.random.Generator) -> np.ndarray:
    if count < 0:
        raise ValidationError(f"count must be >= 0, got {count}")
    pool = model._tail if isinstance(model, LowerTailRescaled) else model.source.values
    if pool.size == 0:
        raise ValidationError("cannot resample from an empty source")
    draws = pool[rng.integers(0, pool.size, size=count)]
    if isinstance(model, SmoothedBootstrap):
        draws = np.abs(draws + model.bandwidth * _epanechnikov_noise(count, rng))
    return draws


def make_fhat(kind: str, sample: WeightSample, bandwidth: float | None = None) -> ResamplingModel:
    """Build the F-hat resampler named ``bootstrap``, ``smoothed`` or ``lowertail``.

    For ``smoothed`` without an explicit bandwidth, ``h = sd * m**-1/5``.
    """
    if kind == "bootstrap":
        return Bootstrap(sample)
    if kind == "smoothed":
        if bandwidth is None:
            sd = float(np.std(sample.values)) or 1.0
            bandwidth = sd * sample.m ** -0.2
        return SmoothedBootstrap(sample, bandwidth)
    if kind == "lowertail":
        return LowerTailRescaled(sample, 0.5 if bandwidth is None else bandwidth)
    raise ValidationError(f"unknown fhat {kind!r}")


def parse_fhat(text: str) -> tuple[str, float | None]:
    """``bootstrap | smoothed | smoothed:h | lowertail[:fraction]`` -> (kind, parameter)."""
    name, _, arg = text.strip().partition(":")
    if name not in ("bootstrap", "smoothed", "lowertail") or (name == "bootstrap" and arg):
        raise ValidationError(f"unknown fhat {text!r}")
    try:
        return name, (float(arg) if arg else None)
    except ValueError:
        raise ValidationError(f"bad fhat parameter in {text!r}") from None


# convergence study ----------------------------------------------------------------

def boundary_convergence_study(model: WeightModel, m_grid: Sequence[int], replications: int,
                               method: str, rng: np.random.Generator,
                               bandwidth="auto") -> list[tuple[int, float, float]]:
    """Rows ``(m, mean psi0, mean |psi0 - F'(0)|)`` over ``replications`` fresh samples per m."""
    target = density_at_zero(model)
    if replications <= 0:
        return []
    rows = []
    for m in m_grid:
        psi = np.empty(replications)
        for r in range(replications):
            psi[r] = estimate_psi0(WeightSample(model.sample(int(m), rng)), method, bandwidth).psi0
        rows.append((int(m), float(psi.mean()), float(np.abs(psi - target).mean())))
    return rows
