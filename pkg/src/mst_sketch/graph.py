"""Weighted undirected graphs on vertices ``0..n-1``.

Complete graphs built by :func:`new_complete` keep only the flat weight array
in condensed (row-major upper triangle) order; endpoints are derived on demand,
so an n=20000 graph costs ~1.6 GB less than storing index arrays.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .errors import ValidationError

__all__ = [
    "Edge",
    "WeightedGraph",
    "new_complete",
    "from_edge_list",
    "is_connected",
    "read_edge_list",
    "write_edge_list",
    "format_edge_list",
    "parse_edge_list",
]


class Edge(NamedTuple):
    u: int
    v: int
    weight: float


def _row_starts(n: int) -> np.ndarray:
    """Condensed index of edge (i, i+1) for each row i."""
    i = np.arange(n, dtype=np.int64)
    return i * n - i * (i + 1) // 2


class WeightedGraph:
    """Immutable vertex count plus a canonical (u < v) weighted edge list."""

    __slots__ = ("n", "_weights", "_u", "_v", "complete", "_order")

    def __init__(self, n: int, weights: np.ndarray, u: np.ndarray | None,
                 v: np.ndarray | None, complete: bool):
        self.n = int(n)
        self._weights = weights
        self._u = u
        self._v = v
        self.complete = bool(complete)
        self._order: np.ndarray | None = None
        for arr in (weights, u, v):
            if arr is not None:
                arr.setflags(write=False)

    # storage -------------------------------------------------------------

    @property
    def condensed(self) -> bool:
        """True when edges are stored implicitly in upper-triangle order."""
        return self._u is None

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def num_edges(self) -> int:
        return int(self._weights.shape[0])

    def endpoints(self, idx: np.ndarray | Sequence[int] | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Endpoint arrays ``(u, v)`` for the given edge indices (all edges if None)."""
        if not self.condensed:
            if idx is None:
                return self._u, self._v
            idx = np.asarray(idx, dtype=np.int64)
            return self._u[idx], self._v[idx]
        if idx is None:
            idx = np.arange(self.num_edges, dtype=np.int64)
        idx = np.asarray(idx, dtype=np.int64)
        starts = _row_starts(self.n)
        u = np.searchsorted(starts, idx, side="right") - 1
        v = idx - starts[u] + u + 1
        return u, v

    @property
    def u(self) -> np.ndarray:
        return self.endpoints()[0]

    @property
    def v(self) -> np.ndarray:
        return self.endpoints()[1]

    def edge(self, i: int) -> Edge:
        u, v = self.endpoints([i])
        return Edge(int(u[0]), int(v[0]), float(self._weights[i]))

    def edges(self) -> Iterator[Edge]:
        u, v = self.endpoints()
        for a, b, w in zip(u.tolist(), v.tolist(), self._weights.tolist()):
            yield Edge(a, b, w)

    def sorted_order(self) -> np.ndarray:
        """Edge indices by ascending weight, ties by index. Computed once, on demand."""
        if self._order is None:
            order = np.argsort(self._weights, kind="stable")
            order.setflags(write=False)
            self._order = order
        return self._order

    def scaled(self, c: float) -> "WeightedGraph":
        """Same topology with every weight multiplied by ``c > 0``."""
        if not c > 0:
            raise ValidationError(f"scale factor must be positive, got {c}")
        return WeightedGraph(self.n, self._weights * c, self._u, self._v, self.complete)

    def __repr__(self) -> str:
        kind = "complete" if self.complete else "general"
        return f"WeightedGraph(n={self.n}, edges={self.num_edges}, {kind})"


def _max_edges(n: int) -> int:
    return n * (n - 1) // 2


def new_complete(n: int, weight_source: Callable[[int, np.random.Generator], np.ndarray],
                 rng: np.random.Generator) -> WeightedGraph:
    """Complete graph on ``n`` vertices with i.i.d. weights.

    ``weight_source(count, rng)`` must return ``count`` nonnegative draws; edges
    receive them in condensed order (0,1), (0,2), ..., (n-2, n-1).
    """
    if n < 2:
        raise ValidationError(f"complete graph needs n >= 2, got n={n}")
    m = _max_edges(n)
    w = np.asarray(weight_source(m, rng), dtype=np.float64)
    if w.shape != (m,):
        raise ValidationError(f"weight source returned shape {w.shape}, expected ({m},)")
    if m and w.min() < 0:
        raise ValidationError("weight source produced a negative weight")
    return WeightedGraph(n, w, None, None, True)


def from_edge_list(n: int, raw_edges: Iterable[tuple[int, int, float]]) -> WeightedGraph:
    """Validate and canonicalize an explicit edge list.

    Orientation is normalized to ``u < v``; duplicates, self-loops, out-of-range
    endpoints and negative weights are rejected with the offending edge named.
    """
    if n < 1:
        raise ValidationError(f"vertex count must be >= 1, got {n}")
    us: list[int] = []
    vs: list[int] = []
    ws: list[float] = []
    seen: set[tuple[int, int]] = set()
    for raw in raw_edges:
        a, b, w = raw
        a, b, w = int(a), int(b), float(w)
        if a == b:
            raise ValidationError(f"self-loop at edge {raw!r}")
        if min(a, b) < 0 or max(a, b) >= n:
            raise ValidationError(f"endpoint out of range 0..{n - 1} in edge {raw!r}")
        if not w >= 0 or math.isinf(w):
            raise ValidationError(f"weight must be finite and >= 0 in edge {raw!r}")
        key = (a, b) if a < b else (b, a)
        if key in seen:
            raise ValidationError(f"duplicate pair {key} in edge {raw!r}")
        seen.add(key)
        us.append(key[0])
        vs.append(key[1])
        ws.append(w)
    complete = len(ws) == _max_edges(n)
    return WeightedGraph(n, np.asarray(ws, dtype=np.float64), np.asarray(us, dtype=np.int64),
                         np.asarray(vs, dtype=np.int64), complete)


def is_connected(g: WeightedGraph) -> bool:
    if g.complete or g.n == 1:
        return True
    if g.num_edges < g.n - 1:
        return False
    u, v = g.endpoints()
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for a, b in zip(u.tolist(), v.tolist()):
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * g.n
    seen[0] = True
    queue = deque([0])
    reached = 1
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if not seen[y]:
                seen[y] = True
                reached += 1
                queue.append(y)
    return reached == g.n


# edge-list text format -----------------------------------------------------

def parse_edge_list(text: str) -> WeightedGraph:
    """Parse ``n <count>`` followed by ``u v weight`` lines; ``#`` lines are comments."""
    n: int | None = None
    edges: list[tuple[int, int, float]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise ValidationError(f"line {lineno}: expected header 'n <count>', got {line!r}")
            try:
                n = int(parts[1])
            except ValueError:
                raise ValidationError(f"line {lineno}: bad vertex count {parts[1]!r}") from None
            continue
        if len(parts) != 3:
            raise ValidationError(f"line {lineno}: expected 'u v weight', got {line!r}")
        try:
            edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
        except ValueError:
            raise ValidationError(f"line {lineno}: cannot parse {line!r}") from None
    if n is None:
        raise ValidationError("missing header line 'n <count>'")
    return from_edge_list(n, edges)


def format_edge_list(g: WeightedGraph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{e.u} {e.v} {e.weight!r}" for e in g.edges())
    return "\n".join(lines) + "\n"


def read_edge_list(path) -> WeightedGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def write_edge_list(g: WeightedGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edge_list(g))
