import itertools
import math

import numpy as np
import pytest

from mst_sketch.graph import from_edge_list

ACCEPTANCE_LINES: list[str] = []


def random_connected_graph(rng: np.random.Generator, n: int, density: float):
    """Random spanning tree plus each remaining pair with probability ``density``; U(0,1) weights."""
    perm = rng.permutation(n)
    pairs = set()
    for i in range(1, n):
        a, b = int(perm[i]), int(perm[rng.integers(0, i)])
        pairs.add((min(a, b), max(a, b)))
    for a, b in itertools.combinations(range(n), 2):
        if (a, b) not in pairs and rng.random() < density:
            pairs.add((a, b))
    pairs = sorted(pairs)
    weights = rng.uniform(size=len(pairs))
    return from_edge_list(n, [(a, b, float(w)) for (a, b), w in zip(pairs, weights)])


def enumerate_spanning_trees(n, edges):
    """Independent oracle: yield index tuples of every spanning tree (plain DFS connectivity)."""
    if n == 1:
        yield ()
        return
    for subset in itertools.combinations(range(len(edges)), n - 1):
        adj = {v: [] for v in range(n)}
        for i in subset:
            a, b, _ = edges[i]
            adj[a].append(b)
            adj[b].append(a)
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) == n:
            yield subset


def oracle_min_tree(g, phi1=lambda s: s):
    edges = list(g.edges())
    best = (math.inf, None)
    for subset in enumerate_spanning_trees(g.n, edges):
        cost = phi1(math.fsum(edges[i].weight for i in subset))
        if cost < best[0]:
            best = (cost, subset)
    return best


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


@pytest.fixture
def triangle():
    return from_edge_list(3, [(0, 1, 1.0), (0, 2, 2.0), (1, 2, 3.0)])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
