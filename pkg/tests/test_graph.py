import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fcsmallworld.errors import InvalidArgument
from fcsmallworld.graph import (
    UNREACHABLE,
    BinaryGraph,
    avg_path_length,
    clustering,
    connected_components,
    degrees,
    local_clustering,
    local_clustering_all,
    metrics,
    shortest_path_lengths,
)

from oracles import clustering_bruteforce, floyd_warshall, local_clustering_bruteforce, random_adjacency

STAR4 = BinaryGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
TRI_PENDANT = BinaryGraph.from_edges(4, [(0, 1), (0, 2), (1, 2), (0, 3)])


@st.composite
def graphs(draw, max_n=30):
    n = draw(st.integers(1, max_n))
    p = draw(st.floats(0, 1))
    seed = draw(st.integers(0, 2**32 - 1))
    return BinaryGraph(random_adjacency(np.random.default_rng(seed), n, p))


def test_graph_validation():
    with pytest.raises(InvalidArgument):
        BinaryGraph(np.array([[0, 1], [0, 0]]))
    with pytest.raises(InvalidArgument):
        BinaryGraph(np.eye(2))
    with pytest.raises(InvalidArgument):
        BinaryGraph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(InvalidArgument):
        BinaryGraph.from_edges(3, [(0, 3)])


def test_degrees():
    assert degrees(BinaryGraph.empty(4)) == [0, 0, 0, 0]
    assert degrees(BinaryGraph.complete(4)) == [3, 3, 3, 3]
    assert degrees(STAR4) == [3, 1, 1, 1]


def test_local_clustering_examples():
    k3 = BinaryGraph.complete(3)
    assert all(local_clustering(k3, i) == 1 for i in range(3))
    assert local_clustering(STAR4, 0) == 0
    assert local_clustering(TRI_PENDANT, 0) == pytest.approx(1 / 3)
    with pytest.raises(InvalidArgument):
        local_clustering(STAR4, 4)


def test_clustering_examples():
    assert clustering(BinaryGraph.complete(6)) == 1
    ring = BinaryGraph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    assert clustering(ring) == 0
    assert clustering(TRI_PENDANT) == pytest.approx(7 / 12, abs=1e-15)


def test_shortest_path_examples():
    path = BinaryGraph.from_edges(3, [(0, 1), (1, 2)])
    assert shortest_path_lengths(path)[0, 2] == 2
    two = BinaryGraph.from_edges(4, [(0, 1), (2, 3)])
    assert shortest_path_lengths(two)[0, 2] == UNREACHABLE


def test_avg_path_length_examples():
    assert avg_path_length(BinaryGraph.complete(5)) == (1.0, 1.0)
    assert avg_path_length(STAR4)[0] == pytest.approx(1.5)
    assert avg_path_length(BinaryGraph.empty(4)) == (None, 0.0)
    # ordered pairs: 8 at distance 1 (the 4 edges both ways), 4 at distance 2
    assert avg_path_length(TRI_PENDANT)[0] == pytest.approx(16 / 12)


def test_avg_path_length_disconnected_and_largest_component():
    # triangle + isolated edge: 3 pairs at 1 in the triangle, 1 pair in the edge
    g = BinaryGraph.from_edges(5, [(0, 1), (1, 2), (0, 2), (3, 4)])
    L, frac = avg_path_length(g)
    assert L == 1.0 and frac == pytest.approx(4 / 10)
    g2 = BinaryGraph.from_edges(6, [(0, 1), (1, 2), (2, 3), (4, 5)])
    assert avg_path_length(g2)[0] == pytest.approx((1 + 2 + 3 + 1 + 2 + 1 + 1) / 7)
    assert avg_path_length(g2, largest_component=True)[0] == pytest.approx(10 / 6)


def test_connected_components_examples():
    assert connected_components(BinaryGraph.complete(5))[1] == 1
    assert connected_components(BinaryGraph.empty(5))[1] == 5
    two_tri = BinaryGraph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    labels, count = connected_components(two_tri)
    assert count == 2
    assert sorted(np.bincount(labels).tolist()) == [3, 3]


def test_metrics_examples():
    m = metrics(BinaryGraph.complete(4))
    assert (m.clustering, m.avg_path_length, m.density, m.n_components) == (1.0, 1.0, 1.0, 1)
    m = metrics(TRI_PENDANT)
    assert m.clustering == pytest.approx(7 / 12) and m.avg_path_length == pytest.approx(4 / 3)
    m = metrics(BinaryGraph.empty(3))
    assert m.clustering == 0 and m.avg_path_length is None


@settings(max_examples=250)
@given(graphs())
def test_clustering_matches_triple_enumeration(g):
    adj = g.adjacency.tolist()
    assert local_clustering_all(g).tolist() == local_clustering_bruteforce(adj)
    assert clustering(g) == clustering_bruteforce(adj)
    assert [local_clustering(g, i) for i in range(g.n)] == local_clustering_bruteforce(adj)


@settings(max_examples=250)
@given(graphs())
def test_distances_match_floyd_warshall(g):
    fw = floyd_warshall(g.adjacency.tolist())
    d = shortest_path_lengths(g)
    expect = np.array([[UNREACHABLE if math.isinf(v) else v for v in row] for row in fw])
    assert np.array_equal(d, expect.reshape(d.shape))


@given(graphs())
def test_metrics_invariants(g):
    m = metrics(g)
    assert sum(m.degree_sequence) == 2 * g.n_edges
    assert (m.finite_pair_fraction == 1.0) == (m.n_components == 1)
    assert 0 <= m.clustering <= 1
    if m.n_components == 1 and g.n > 1:
        assert 1 <= m.avg_path_length <= g.n - 1


@given(graphs(max_n=20), st.integers(0, 2**32 - 1))
def test_adding_an_edge_never_lengthens_paths(g, seed):
    missing = np.argwhere(np.triu(~g.adjacency, 1))
    if missing.size == 0:
        return
    i, j = missing[np.random.default_rng(seed).integers(len(missing))]
    adj = g.adjacency.copy()
    adj[i, j] = adj[j, i] = True
    before = shortest_path_lengths(g).astype(float)
    after = shortest_path_lengths(BinaryGraph(adj)).astype(float)
    before[before < 0] = np.inf
    after[after < 0] = np.inf
    assert np.all(after <= before)


@given(graphs(), st.integers(0, 2**32 - 1))
def test_metrics_relabel_invariant(g, seed):
    perm = np.random.default_rng(seed).permutation(g.n)
    a, b = metrics(g), metrics(g.relabel(perm))
    assert a.clustering == b.clustering
    assert a.avg_path_length == b.avg_path_length
    assert a.n_components == b.n_components
    assert sorted(a.degree_sequence) == sorted(b.degree_sequence)
