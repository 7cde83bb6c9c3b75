"""Exception hierarchy.

Each family maps to one CLI exit code (see ``mst_sketch.cli``).
"""


class MstSketchError(Exception):
    exit_code = 1


class ValidationError(MstSketchError, ValueError):
    """Malformed input: bad graph, bad spec string, bad color."""

    exit_code = 2


class NoSpanningTreeError(ValidationError):
    """The graph is disconnected, so no spanning tree exists."""


class PreconditionError(MstSketchError, ValueError):
    """A statistical precondition does not hold (e.g. F'(0) is not finite and positive)."""

    exit_code = 3


class DegenerateSampleError(PreconditionError):
    """The sample carries no mass near zero, so a boundary estimate would be 0."""


class SizeLimitError(MstSketchError, ValueError):
    exit_code = 4


class UnsupportedCostError(SizeLimitError):
    """Vertex-dependent cost on a graph too large for exhaustive search."""
