"""Decomposed spanning-tree cost: phi1(sum of edge weights) + phi2(vertex colors).

Every edge transform in the catalog is continuous and strictly increasing on
[0, inf), which is what lets the phi-MST be solved as an ordinary MST.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .errors import PreconditionError, ValidationError

__all__ = [
    "ZETA3",
    "Identity",
    "Power",
    "Log1p",
    "Scaled",
    "EdgeCostTransform",
    "ZeroVertexCost",
    "ColorHistogramLinear",
    "VertexCostFunction",
    "CostSpec",
    "eval_phi1",
    "eval_cost",
    "limit_value",
    "parse_phi1",
    "parse_phi2",
    "format_phi1",
    "format_phi2",
]

# Apery's constant
ZETA3 = 1.2020569031595943


@dataclass(frozen=True)
class Identity:
    def __call__(self, x):
        return x


@dataclass(frozen=True)
class Power:
    p: float

    def __post_init__(self):
        if not 0 < self.p <= 1:
            raise ValidationError(f"power exponent must lie in (0, 1], got {self.p}")

    def __call__(self, x):
        return np.power(x, self.p) if isinstance(x, np.ndarray) else float(x) ** self.p


@dataclass(frozen=True)
class Log1p:
    def __call__(self, x):
        return np.log1p(x)


@dataclass(frozen=True)
class Scaled:
    c: float
    inner: "EdgeCostTransform"

    def __post_init__(self):
        if not self.c > 0:
            raise ValidationError(f"scale must be > 0, got {self.c}")

    def __call__(self, x):
        return self.c * self.inner(x)


EdgeCostTransform = Union[Identity, Power, Log1p, Scaled]


@dataclass(frozen=True)
class ZeroVertexCost:
    def __call__(self, colors: Iterable[int]) -> float:
        return 0.0


@dataclass(frozen=True)
class ColorHistogramLinear:
    """Sum of a per-color unit cost over the vertices of the subgraph."""

    unit_costs: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(x) for x in self.unit_costs)
        object.__setattr__(self, "unit_costs", c)
        if not c:
            raise ValidationError("need at least one color cost")
        if min(c) < 0:
            raise ValidationError("color costs must be >= 0")

    @property
    def k(self) -> int:
        return len(self.unit_costs)

    def __call__(self, colors: Iterable[int]) -> float:
        colors = np.asarray(list(colors) if not isinstance(colors, np.ndarray) else colors,
                            dtype=np.int64)
        if colors.size == 0:
            return 0.0
        if colors.min() < 1 or colors.max() > self.k:
            bad = colors[(colors < 1) | (colors > self.k)][0]
            raise ValidationError(f"invalid color {bad}; expected 1..{self.k}")
        counts = np.bincount(colors - 1, minlength=self.k)
        return float(np.dot(counts, self.unit_costs))


VertexCostFunction = Union[ZeroVertexCost, ColorHistogramLinear]


@dataclass(frozen=True)
class CostSpec:
    phi1: EdgeCostTransform = Identity()
    phi2: VertexCostFunction = ZeroVertexCost()

    @property
    def edge_only(self) -> bool:
        return isinstance(self.phi2, ZeroVertexCost)


def eval_phi1(t: EdgeCostTransform, total):
    if np.any(np.asarray(total) < 0):
        raise ValidationError(f"edge-weight sum must be >= 0, got {total}")
    out = t(total)
    return float(out) if np.ndim(out) == 0 else out


def eval_cost(spec: CostSpec, edge_weight_sum: float, subgraph_colors: Iterable[int] = ()) -> float:
    return eval_phi1(spec.phi1, edge_weight_sum) + spec.phi2(subgraph_colors)


def limit_value(t: EdgeCostTransform, fprime0: float) -> float:
    """Large-n limit of the phi1-cost of the MST of a complete random graph."""
    if not fprime0 > 0 or np.isinf(fprime0):
        raise PreconditionError(f"density at zero must be finite and > 0, got {fprime0}")
    return eval_phi1(t, ZETA3 / fprime0)


# CLI strings ------------------------------------------------------------------

def parse_phi1(text: str) -> EdgeCostTransform:
    """``identity | pow:p | log1p | scaled:c,<inner>``"""
    text = text.strip()
    name, _, rest = text.partition(":")
    name = name.lower()
    try:
        if name == "identity" and not rest:
            return Identity()
        if name == "log1p" and not rest:
            return Log1p()
        if name in ("pow", "power") and rest:
            return Power(float(rest))
        if name == "scaled" and rest:
            c, _, inner = rest.partition(",")
            return Scaled(float(c), parse_phi1(inner))
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"bad phi1 {text!r}") from None
    raise ValidationError(f"unknown phi1 {text!r}")


def parse_phi2(text: str) -> VertexCostFunction:
    """``zero | hist:c1,c2,...``"""
    text = text.strip()
    name, _, rest = text.partition(":")
    if name.lower() == "zero" and not rest:
        return ZeroVertexCost()
    if name.lower() == "hist" and rest:
        try:
            return ColorHistogramLinear(tuple(float(x) for x in rest.split(",")))
        except ValueError as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"bad phi2 {text!r}") from None
    raise ValidationError(f"unknown phi2 {text!r}")


def format_phi1(t: EdgeCostTransform) -> str:
    if isinstance(t, Identity):
        return "identity"
    if isinstance(t, Log1p):
        return "log1p"
    if isinstance(t, Power):
        return f"pow:{t.p!r}"
    return f"scaled:{t.c!r},{format_phi1(t.inner)}"


def format_phi2(f: VertexCostFunction) -> str:
    if isinstance(f, ZeroVertexCost):
        return "zero"
    return "hist:" + ",".join(repr(c) for c in f.unit_costs)
