"""Sketch-based estimation of minimum spanning tree costs on large random graphs."""

from .costs import CostSpec, Identity, Log1p, Power, Scaled, ZETA3, eval_cost, eval_phi1, limit_value
from .distributions import Exponential, Uniform, Weibull, density_at_zero
from .errors import (DegenerateSampleError, MstSketchError, NoSpanningTreeError, PreconditionError,
                     SizeLimitError, UnsupportedCostError, ValidationError)
from .graph import WeightedGraph, from_edge_list, is_connected, new_complete
from .sketch import EstimateReport, SketchConfig, estimate_avcost, estimate_from_graph
from .spanning_tree import brute_force_mst, kruskal, phi_mst, prim_dense

__version__ = "0.1.0"

__all__ = [
    "CostSpec", "Identity", "Log1p", "Power", "Scaled", "ZETA3", "eval_cost", "eval_phi1",
    "limit_value", "Exponential", "Uniform", "Weibull", "density_at_zero", "DegenerateSampleError",
    "MstSketchError", "NoSpanningTreeError", "PreconditionError", "SizeLimitError",
    "UnsupportedCostError", "ValidationError", "WeightedGraph", "from_edge_list", "is_connected",
    "new_complete", "EstimateReport", "SketchConfig", "estimate_avcost", "estimate_from_graph",
    "brute_force_mst", "kruskal", "phi_mst", "prim_dense",
]
