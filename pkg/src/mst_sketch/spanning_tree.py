"""Exact minimum spanning tree solvers and the phi-MST wrapper.

``kruskal`` handles sparse inputs; ``prim_dense`` is the O(n^2) array version
for complete graphs; ``brute_force_mst`` enumerates every (n-1)-edge subset and
is the ground-truth oracle for tiny graphs under any :class:`CostSpec`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .costs import CostSpec, eval_cost, eval_phi1
from .distributions import VertexColoring
from .errors import NoSpanningTreeError, SizeLimitError, UnsupportedCostError, ValidationError
from .graph import WeightedGraph, _row_starts, is_connected

__all__ = [
    "BRUTE_FORCE_MAX_N",
    "DisjointSetForest",
    "SpanningTree",
    "kruskal",
    "prim_dense",
    "brute_force_mst",
    "phi_mst",
]

BRUTE_FORCE_MAX_N = 8


class DisjointSetForest:
    """Union by rank with path compression."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n
        self.component_count = n

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the components of ``a`` and ``b``; False if already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.component_count -= 1
        return True


@dataclass(frozen=True)
class SpanningTree:
    edge_indices: tuple[int, ...]
    total_weight: float

    @classmethod
    def from_edges(cls, g: WeightedGraph, idx) -> "SpanningTree":
        """Canonical form: indices ascending, weight summed exactly (order-free)."""
        idx = tuple(sorted(int(i) for i in idx))
        w = g.weights[list(idx)] if idx else np.empty(0)
        return cls(idx, math.fsum(w.tolist()))

    def to_json(self) -> dict:
        return {"edge_indices": list(self.edge_indices), "total_weight": self.total_weight}


def _no_tree(g: WeightedGraph) -> NoSpanningTreeError:
    return NoSpanningTreeError(f"graph with n={g.n} and {g.num_edges} edges is disconnected")


def kruskal(g: WeightedGraph) -> SpanningTree:
    """Minimum spanning tree; ties broken by ascending edge index."""
    n = g.n
    if n == 1:
        return SpanningTree((), 0.0)
    order = g.sorted_order()
    dsf = DisjointSetForest(n)
    chosen: list[int] = []
    chunk = max(4 * n, 1024)
    pos = 0
    while len(chosen) < n - 1 and pos < order.shape[0]:
        idx = order[pos:pos + chunk]
        us, vs = g.endpoints(idx)
        for e, a, b in zip(idx.tolist(), us.tolist(), vs.tolist()):
            if dsf.union(a, b):
                chosen.append(e)
                if len(chosen) == n - 1:
                    break
        pos += chunk
    if len(chosen) < n - 1:
        raise _no_tree(g)
    return SpanningTree.from_edges(g, chosen)


def _dense_rows(g: WeightedGraph):
    """Return ``row(i) -> (weights to every vertex, edge index to every vertex)``."""
    n = g.n
    w = g.weights
    if g.condensed:
        offset = _row_starts(n) - np.arange(n) - 1
        ar = np.arange(n, dtype=np.int64)

        def row(i):
            idx = np.empty(n, dtype=np.int64)
            idx[:i] = offset[:i] + i
            idx[i] = 0
            idx[i + 1:] = offset[i] + ar[i + 1:]
            return w[idx], idx

        return row
    dense_w = np.full((n, n), np.inf)
    dense_e = np.full((n, n), -1, dtype=np.int64)
    u, v = g.endpoints()
    ids = np.arange(g.num_edges)
    dense_w[u, v] = dense_w[v, u] = w
    dense_e[u, v] = dense_e[v, u] = ids
    return lambda i: (dense_w[i], dense_e[i])


def prim_dense(g: WeightedGraph) -> SpanningTree:
    """Array-based Prim: n rounds of an O(n) scan, no heap."""
    n = g.n
    if n == 1:
        return SpanningTree((), 0.0)
    row = _dense_rows(g)
    in_tree = np.zeros(n, dtype=bool)
    best = np.full(n, np.inf)
    best_edge = np.full(n, -1, dtype=np.int64)
    chosen = []
    cur = 0
    in_tree[0] = True
    for _ in range(n - 1):
        w, idx = row(cur)
        upd = w < best
        upd &= ~in_tree
        best[upd] = w[upd]
        best_edge[upd] = idx[upd]
        nxt = int(np.argmin(best))
        if best_edge[nxt] < 0:
            raise _no_tree(g)
        chosen.append(int(best_edge[nxt]))
        in_tree[nxt] = True
        best[nxt] = np.inf
        best_edge[nxt] = -1
        cur = nxt
    return SpanningTree.from_edges(g, chosen)


@lru_cache(maxsize=8)
def _combinations(m: int, r: int) -> np.ndarray:
    total = math.comb(m, r)
    flat = np.fromiter(itertools.chain.from_iterable(itertools.combinations(range(m), r)),
                       dtype=np.int16, count=total * r)
    flat.setflags(write=False)
    return flat.reshape(total, r)


def _acyclic_mask(eu: np.ndarray, ev: np.ndarray, n: int) -> np.ndarray:
    """For rows of endpoint arrays (S, r), True where the r edges form a forest."""
    s, r = eu.shape
    labels = np.tile(np.arange(n, dtype=np.int8), (s, 1))
    rows = np.arange(s)
    ok = np.ones(s, dtype=bool)
    for k in range(r):
        a = labels[rows, eu[:, k]]
        b = labels[rows, ev[:, k]]
        ok &= a != b
        lo = np.minimum(a, b)[:, None]
        hi = np.maximum(a, b)[:, None]
        labels = np.where(labels == hi, lo, labels)
    return ok


@lru_cache(maxsize=64)
def _spanning_subsets(n: int, u_bytes: bytes, v_bytes: bytes) -> np.ndarray:
    """All (n-1)-edge subsets forming a spanning tree, in lexicographic order."""
    u = np.frombuffer(u_bytes, dtype=np.int8)
    v = np.frombuffer(v_bytes, dtype=np.int8)
    combos = _combinations(u.shape[0], n - 1)
    keep = []
    step = 200_000
    for start in range(0, combos.shape[0], step):
        block = combos[start:start + step]
        keep.append(block[_acyclic_mask(u[block], v[block], n)])
    trees = np.concatenate(keep)
    trees.setflags(write=False)
    return trees


def brute_force_mst(g: WeightedGraph, spec: CostSpec,
                    coloring: VertexColoring | None = None) -> tuple[SpanningTree, float]:
    """Exhaustive minimum-cost spanning tree for n <= 8.

    Every (n-1)-subset of edges is checked; an acyclic one on n vertices is a
    spanning tree. Ties go to the lexicographically first subset.
    """
    n = g.n
    if n > BRUTE_FORCE_MAX_N:
        raise SizeLimitError(f"brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got n={n}")
    if not is_connected(g):
        raise _no_tree(g)
    if not spec.edge_only and coloring is None:
        raise ValidationError("vertex cost needs a coloring")
    colors = coloring.colors if coloring is not None else np.empty(0, dtype=np.int64)
    if n == 1:
        return SpanningTree((), 0.0), eval_cost(spec, 0.0, colors)

    u, v = g.endpoints()
    w = g.weights
    # a spanning tree touches every vertex, so the vertex term is the same for all of them
    vertex_cost = spec.phi2(colors)
    trees = _spanning_subsets(n, u.astype(np.int8).tobytes(), v.astype(np.int8).tobytes())
    sums = w[trees].sum(axis=1)
    costs = np.asarray(eval_phi1(spec.phi1, sums)) + vertex_cost
    lo = costs.min()
    # re-rank near-minimal candidates with exactly rounded sums
    near = np.flatnonzero(costs <= lo + 1e-9 * max(1.0, abs(lo)))
    best_cost = math.inf
    best_subset = None
    for j in near.tolist():
        subset = trees[j]
        cost = eval_cost(spec, math.fsum(w[subset].tolist()), colors)
        if cost < best_cost:
            best_cost, best_subset = cost, subset
    tree = SpanningTree.from_edges(g, best_subset.tolist())
    return tree, best_cost


def phi_mst(g: WeightedGraph, spec: CostSpec,
            coloring: VertexColoring | None = None) -> tuple[SpanningTree, float]:
    """Minimum phi-cost spanning tree.

    With no vertex cost, a strictly increasing phi1 of the weight sum has the
    same minimizer as the sum itself, so the linear MST is exact. Vertex costs
    fall back to exhaustive search, which is only allowed for n <= 8.
    """
    if spec.edge_only:
        tree = prim_dense(g) if g.condensed else kruskal(g)
        return tree, eval_phi1(spec.phi1, tree.total_weight)
    if g.n > BRUTE_FORCE_MAX_N:
        raise UnsupportedCostError(
            f"vertex-dependent cost needs exhaustive search; n={g.n} exceeds {BRUTE_FORCE_MAX_N}")
    return brute_force_mst(g, spec, coloring)
