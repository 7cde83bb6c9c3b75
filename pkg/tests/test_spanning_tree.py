import itertools
import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mst_sketch.costs import ColorHistogramLinear, CostSpec, Identity, Log1p, Power
from mst_sketch.distributions import VertexColoring
from mst_sketch.errors import NoSpanningTreeError, SizeLimitError, UnsupportedCostError
from mst_sketch.graph import from_edge_list, new_complete
from mst_sketch.spanning_tree import (DisjointSetForest, SpanningTree, brute_force_mst, kruskal,
                                      phi_mst, prim_dense)

from conftest import oracle_min_tree, random_connected_graph


def uniform(count, rng):
    return rng.uniform(size=count)


def check_tree(g, tree: SpanningTree):
    assert len(tree.edge_indices) == g.n - 1
    dsf = DisjointSetForest(g.n)
    for i in tree.edge_indices:
        e = g.edge(i)
        assert dsf.union(e.u, e.v), "cycle in tree"
    assert dsf.component_count == 1
    assert tree.total_weight == pytest.approx(sum(g.weights[list(tree.edge_indices)]), rel=1e-9)


def test_triangle(triangle):
    for solver in (kruskal, prim_dense):
        tree = solver(triangle)
        assert tree.total_weight == 3.0
        assert tree.edge_indices == (0, 1)
    tree, cost = brute_force_mst(triangle, CostSpec())
    assert cost == 3.0 and tree.edge_indices == (0, 1)


def test_single_edge():
    g = from_edge_list(2, [(0, 1, 0.375)])
    assert kruskal(g).total_weight == 0.375
    assert prim_dense(g).total_weight == 0.375


def test_single_vertex():
    g = from_edge_list(1, [])
    assert prim_dense(g) == SpanningTree((), 0.0)
    assert kruskal(g) == SpanningTree((), 0.0)


def test_disconnected_raises():
    g = from_edge_list(4, [(0, 1, 1.0), (2, 3, 1.0)])
    for fn in (kruskal, prim_dense, lambda h: brute_force_mst(h, CostSpec())):
        with pytest.raises(NoSpanningTreeError):
            fn(g)


def test_kruskal_matches_independent_enumeration():
    g = new_complete(6, uniform, np.random.default_rng(6))
    cost, subset = oracle_min_tree(g)
    tree = kruskal(g)
    assert tree.total_weight == cost
    assert tree.edge_indices == subset
    assert brute_force_mst(g, CostSpec())[0] == tree


def test_prim_matches_kruskal_large():
    g = new_complete(1000, uniform, np.random.default_rng(1000))
    p, k = prim_dense(g), kruskal(g)
    assert p.total_weight == pytest.approx(k.total_weight, abs=1e-9)
    assert p.edge_indices == k.edge_indices


def test_prim_matches_networkx(rng):
    g = random_connected_graph(rng, 40, 0.3)
    nxg = nx.Graph()
    nxg.add_weighted_edges_from(g.edges())
    expected = nx.minimum_spanning_tree(nxg).size(weight="weight")
    assert prim_dense(g).total_weight == pytest.approx(expected, rel=1e-12)
    assert kruskal(g).total_weight == pytest.approx(expected, rel=1e-12)


def test_kruskal_tie_breaking_by_index():
    g = from_edge_list(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)])
    assert kruskal(g).edge_indices == (0, 1)


def test_brute_force_all_equal_weights():
    g = from_edge_list(4, [(a, b, 1.0) for a, b in itertools.combinations(range(4), 2)])
    tree, cost = brute_force_mst(g, CostSpec())
    assert cost == 3.0
    check_tree(g, tree)


def test_brute_force_counts_cayley_trees():
    # K4 has 4**2 = 16 spanning trees, all of cost 3
    from mst_sketch.spanning_tree import _spanning_subsets
    g = from_edge_list(4, [(a, b, 1.0) for a, b in itertools.combinations(range(4), 2)])
    u, v = g.endpoints()
    assert _spanning_subsets(4, u.astype(np.int8).tobytes(), v.astype(np.int8).tobytes()).shape[0] == 16
    assert _spanning_subsets(8, *[a.astype(np.int8).tobytes() for a in np.triu_indices(8, 1)]).shape[0] == 8 ** 6


def test_brute_force_power_matches_kruskal():
    g = new_complete(5, uniform, np.random.default_rng(55))
    tree, cost = brute_force_mst(g, CostSpec(Power(0.5)))
    k = kruskal(g)
    assert tree == k
    assert cost == math.sqrt(k.total_weight)


def test_brute_force_size_limit(rng):
    g = new_complete(9, uniform, rng)
    with pytest.raises(SizeLimitError):
        brute_force_mst(g, CostSpec())


def test_phi_mst_examples(triangle):
    assert phi_mst(triangle, CostSpec())[1] == 3.0
    assert phi_mst(triangle, CostSpec(Power(0.5)))[1] == pytest.approx(1.7320508, abs=1e-7)


def test_phi_mst_log1p_matches_oracle():
    g = new_complete(6, uniform, np.random.default_rng(66))
    tree, cost = phi_mst(g, CostSpec(Log1p()))
    assert (tree, cost) == brute_force_mst(g, CostSpec(Log1p()))
    assert cost == oracle_min_tree(g, math.log1p)[0]


def test_phi_mst_vertex_cost_small_uses_exhaustive_search(rng):
    g = new_complete(5, uniform, rng)
    colors = VertexColoring(np.array([1, 2, 2, 1, 2]), 2)
    spec = CostSpec(Identity(), ColorHistogramLinear((1.0, 10.0)))
    tree, cost = phi_mst(g, spec, colors)
    assert cost == pytest.approx(kruskal(g).total_weight + 2 * 1.0 + 3 * 10.0, rel=1e-15)


def test_phi_mst_vertex_cost_large_refused(rng):
    g = new_complete(9, uniform, rng)
    colors = VertexColoring(np.ones(9, dtype=int), 1)
    with pytest.raises(UnsupportedCostError):
        phi_mst(g, CostSpec(Identity(), ColorHistogramLinear((1.0,))), colors)


graph_cases = st.tuples(st.integers(2, 7), st.floats(0.0, 1.0), st.integers(0, 2**32 - 1))


@given(graph_cases)
@settings(max_examples=60, deadline=None)
def test_solver_agreement(case):
    n, density, seed = case
    g = random_connected_graph(np.random.default_rng(seed), n, density)
    k, p = kruskal(g), prim_dense(g)
    b, cost = brute_force_mst(g, CostSpec())
    assert k.total_weight == p.total_weight == b.total_weight == cost
    assert k.edge_indices == p.edge_indices == b.edge_indices
    check_tree(g, k)


@given(graph_cases)
@settings(max_examples=60, deadline=None)
def test_cut_property(case):
    n, density, seed = case
    g = random_connected_graph(np.random.default_rng(seed), n, density)
    tree = kruskal(g)
    u, v = g.endpoints()
    for removed in tree.edge_indices:
        dsf = DisjointSetForest(n)
        for i in tree.edge_indices:
            if i != removed:
                dsf.union(int(u[i]), int(v[i]))
        side = np.array([dsf.find(x) == dsf.find(int(u[removed])) for x in range(n)])
        crossing = side[u] != side[v]
        assert g.weights[removed] == g.weights[crossing].min()


@given(graph_cases, st.sampled_from([Power(0.5), Power(0.25), Log1p()]))
@settings(max_examples=40, deadline=None)
def test_monotone_argmin_invariance(case, t):
    n, density, seed = case
    g = random_connected_graph(np.random.default_rng(seed), n, density)
    lin, _ = phi_mst(g, CostSpec())
    tree, cost = phi_mst(g, CostSpec(t))
    assert tree.edge_indices == lin.edge_indices
    assert cost == pytest.approx(t(lin.total_weight), rel=1e-12)
    assert brute_force_mst(g, CostSpec(t))[0].edge_indices == lin.edge_indices


@given(graph_cases, st.floats(0.01, 100.0))
@settings(max_examples=40, deadline=None)
def test_scaling_equivariance(case, c):
    n, density, seed = case
    g = random_connected_graph(np.random.default_rng(seed), n, density)
    base, scaled = kruskal(g), kruskal(g.scaled(c))
    assert scaled.edge_indices == base.edge_indices
    assert scaled.total_weight == pytest.approx(c * base.total_weight, rel=1e-12)
    # power-of-two scaling is exact in floating point
    assert kruskal(g.scaled(4.0)).total_weight == 4.0 * base.total_weight


@given(st.integers(1, 30), st.lists(st.tuples(st.integers(0, 29), st.integers(0, 29)), max_size=80))
def test_disjoint_set_forest_invariants(n, ops):
    dsf = DisjointSetForest(n)
    merges = 0
    for a, b in ops:
        a, b = a % n, b % n
        before = dsf.component_count
        merged = dsf.union(a, b)
        merges += merged
        assert dsf.component_count == before - merged
    for x in range(n):
        assert dsf.find(dsf.find(x)) == dsf.find(x)
    assert dsf.component_count + merges == n
    assert dsf.component_count == len({dsf.find(x) for x in range(n)})
