"""Edge-weight and vertex-color models.

The weight catalog is closed: every member has an analytic CDF and a known
density at zero, which the validation experiments use as ground truth.
``Weibull`` exists as a negative control for the F(0)=0, 0 < F'(0) < inf
preconditions of the MST limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import PreconditionError, ValidationError

__all__ = [
    "Uniform",
    "Exponential",
    "Weibull",
    "WeightModel",
    "ColorModel",
    "VertexColoring",
    "sample_weights",
    "cdf",
    "density_at_zero",
    "sample_coloring",
    "empirical_pmf",
    "parse_model",
    "format_model",
]


@dataclass(frozen=True)
class Uniform:
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if self.a != 0:
            raise ValidationError(f"uniform lower bound must be 0, got {self.a}")
        if not self.b > 0:
            raise ValidationError(f"uniform upper bound must be > 0, got {self.b}")

    control = False

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(0.0, self.b, size=count)

    def cdf(self, x):
        return np.clip(np.asarray(x, dtype=np.float64) / self.b, 0.0, 1.0)

    def density_at_zero(self) -> float:
        return 1.0 / self.b


@dataclass(frozen=True)
class Exponential:
    rate: float = 1.0

    def __post_init__(self):
        if not self.rate > 0:
            raise ValidationError(f"exponential rate must be > 0, got {self.rate}")

    control = False

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return rng.exponential(1.0 / self.rate, size=count)

    def cdf(self, x):
        x = np.maximum(np.asarray(x, dtype=np.float64), 0.0)
        return -np.expm1(-self.rate * x)

    def density_at_zero(self) -> float:
        return float(self.rate)


@dataclass(frozen=True)
class Weibull:
    """Negative control: shape != 1 breaks the finite positive density at zero."""

    shape: float
    scale: float = 1.0

    def __post_init__(self):
        if not (self.shape > 0 and self.scale > 0):
            raise ValidationError(f"weibull needs shape, scale > 0, got {self.shape}, {self.scale}")

    control = True

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return self.scale * rng.weibull(self.shape, size=count)

    def cdf(self, x):
        x = np.maximum(np.asarray(x, dtype=np.float64), 0.0)
        return -np.expm1(-((x / self.scale) ** self.shape))

    def density_at_zero(self) -> float:
        if self.shape < 1:
            raise PreconditionError("infinite density at zero")
        if self.shape > 1:
            raise PreconditionError("zero density at zero")
        return 1.0 / self.scale


WeightModel = Union[Uniform, Exponential, Weibull]


def sample_weights(model: WeightModel, count: int, rng: np.random.Generator) -> np.ndarray:
    if count < 0:
        raise ValidationError(f"count must be >= 0, got {count}")
    return model.sample(count, rng)


def cdf(model: WeightModel, x):
    """Analytic CDF; scalar in, float out, array in, array out."""
    out = model.cdf(x)
    return float(out) if np.ndim(out) == 0 else out


def density_at_zero(model: WeightModel) -> float:
    """F'(0) of the model; raises PreconditionError for the Weibull controls."""
    return model.density_at_zero()


def parse_model(text: str) -> WeightModel:
    """Parse ``uniform:a,b``, ``exp:rate`` or ``weibull:shape,scale``."""
    name, _, args = text.strip().partition(":")
    try:
        vals = [float(x) for x in args.split(",")] if args else []
    except ValueError:
        raise ValidationError(f"bad model parameters in {text!r}") from None
    name = name.lower()
    if name == "uniform" and len(vals) in (1, 2):
        return Uniform(0.0, vals[0]) if len(vals) == 1 else Uniform(vals[0], vals[1])
    if name in ("exp", "exponential") and len(vals) == 1:
        return Exponential(vals[0])
    if name == "weibull" and len(vals) in (1, 2):
        return Weibull(*vals)
    raise ValidationError(f"unknown weight model {text!r}")


def format_model(model: WeightModel) -> str:
    if isinstance(model, Uniform):
        return f"uniform:{model.a!r},{model.b!r}"
    if isinstance(model, Exponential):
        return f"exp:{model.rate!r}"
    return f"weibull:{model.shape!r},{model.scale!r}"


# colors ---------------------------------------------------------------------

@dataclass(frozen=True)
class ColorModel:
    """Categorical law over colors ``1..k``; ``probs[i]`` is P(color = i + 1)."""

    probs: tuple[float, ...]

    def __post_init__(self):
        p = tuple(float(x) for x in self.probs)
        object.__setattr__(self, "probs", p)
        if not p:
            raise ValidationError("color model needs k >= 1")
        if min(p) < 0:
            raise ValidationError("color probabilities must be >= 0")
        if abs(math.fsum(p) - 1.0) > 1e-12:
            raise ValidationError(f"color probabilities sum to {math.fsum(p)!r}, not 1")

    @property
    def k(self) -> int:
        return len(self.probs)


@dataclass(frozen=True)
class VertexColoring:
    colors: np.ndarray
    k: int

    def __post_init__(self):
        colors = np.asarray(self.colors, dtype=np.int64)
        colors.setflags(write=False)
        object.__setattr__(self, "colors", colors)
        if self.k < 1:
            raise ValidationError(f"k must be >= 1, got {self.k}")
        if colors.size and (colors.min() < 1 or colors.max() > self.k):
            raise ValidationError(f"colors must lie in 1..{self.k}")

    @property
    def n(self) -> int:
        return int(self.colors.shape[0])


def sample_coloring(model: ColorModel, n: int, rng: np.random.Generator) -> VertexColoring:
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    p = np.asarray(model.probs)
    colors = rng.choice(model.k, size=n, p=p / p.sum()) + 1
    return VertexColoring(colors, model.k)


def empirical_pmf(coloring: VertexColoring, infer_k: bool = False) -> ColorModel:
    """Relative color frequencies.

    With ``infer_k`` the support is taken as ``1..max observed color`` instead
    of the declared ``k``.
    """
    if coloring.n < 1:
        raise ValidationError("empty coloring")
    k = int(coloring.colors.max()) if infer_k else coloring.k
    counts = np.bincount(coloring.colors - 1, minlength=k)[:k]
    probs = counts / coloring.n
    # absorb rounding so the sum is 1 to within the ColorModel tolerance
    probs[np.argmax(probs)] += 1.0 - math.fsum(probs)
    return ColorModel(tuple(probs.tolist()))
