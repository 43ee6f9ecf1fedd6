import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from connectit.driver import bfs_oracle
from connectit.graph import (
    EdgeList,
    Graph,
    GraphFormatError,
    barabasi_albert,
    erdos_renyi,
    generate_graph,
    is_symmetric,
    load_adjacency_graph,
    load_edge_list,
    symmetrize,
    torus,
    write_adjacency_graph,
)


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_adjacency_echoes_input(tmp_path):
    p = _write(tmp_path, "g.adj", "AdjacencyGraph\n3\n4\n0\n2\n3\n1\n2\n0\n0\n")
    g = load_adjacency_graph(p)
    assert (g.n, g.m) == (3, 4)
    assert g.offsets.tolist() == [0, 2, 3, 4]
    assert g.neighbors.tolist() == [1, 2, 0, 0]


def test_load_adjacency_count_mismatch(tmp_path):
    p = _write(tmp_path, "g.adj", "AdjacencyGraph\n3\n4\n0\n2\n3\n1\n2\n0\n")
    with pytest.raises(GraphFormatError, match="edge count mismatch"):
        load_adjacency_graph(p)
    p = _write(tmp_path, "h.adj", "AdjacencyGraph\n3\n4\n0\n2\n3\n1\n2\n0\n0\n1\n")
    with pytest.raises(GraphFormatError, match="edge count mismatch"):
        load_adjacency_graph(p)


def test_load_adjacency_empty(tmp_path):
    g = load_adjacency_graph(_write(tmp_path, "e.adj", "AdjacencyGraph\n0\n0\n"))
    assert g.n == 0 and g.m == 0


def test_load_adjacency_errors_name_line(tmp_path):
    with pytest.raises(GraphFormatError, match=r":1: bad header"):
        load_adjacency_graph(_write(tmp_path, "a", "Adjacency\n1\n0\n0\n"))
    with pytest.raises(GraphFormatError, match=r":6: edge target 7 out of range"):
        load_adjacency_graph(_write(tmp_path, "b", "AdjacencyGraph\n2\n2\n0\n1\n7\n0\n"))


def test_adjacency_roundtrip(tmp_path):
    g = erdos_renyi(50, avg_deg=4, seed=3)
    write_adjacency_graph(g, tmp_path / "g.adj")
    h = load_adjacency_graph(tmp_path / "g.adj")
    assert np.array_equal(g.offsets, h.offsets) and np.array_equal(g.neighbors, h.neighbors)


def test_load_edge_list(tmp_path):
    el = load_edge_list(_write(tmp_path, "e", "# comment\n0 2\n1 3\n"))
    assert el.pairs() == [(0, 2), (1, 3)] and el.weights is None
    w = load_edge_list(_write(tmp_path, "w", "0 1 2.5\n"))
    assert w.pairs() == [(0, 1)] and w.weights.tolist() == [2.5]
    with pytest.raises(GraphFormatError, match="negative"):
        load_edge_list(_write(tmp_path, "n", "0 -1\n"))
    with pytest.raises(GraphFormatError, match="non-integer"):
        load_edge_list(_write(tmp_path, "x", "0 a\n"))


def test_symmetrize_examples():
    g = symmetrize(EdgeList.from_pairs([(0, 2), (1, 3), (2, 5), (3, 4), (4, 5)], n=6), 6)
    assert g.m == 10
    g = symmetrize(EdgeList.from_pairs([(0, 0), (0, 1), (1, 0)], n=2), 2)
    assert g.m == 2
    g = symmetrize((np.empty(0, np.int64), np.empty(0, np.int64)), 5)
    assert g.m == 0 and g.offsets.tolist() == [0] * 6


def test_edge_list_validation():
    with pytest.raises(ValueError):
        EdgeList.from_pairs([(0, 5)], n=3)
    with pytest.raises(ValueError):
        symmetrize(EdgeList.from_pairs([(0, 5)]), 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 30).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=80))))
def test_symmetrize_invariants(case):
    n, pairs = case
    g = symmetrize(EdgeList.from_pairs(pairs, n=n) if pairs else (np.empty(0, np.int64), np.empty(0, np.int64)), n)
    assert g.offsets[0] == 0 and g.offsets[-1] == g.m
    assert np.all(np.diff(g.offsets) >= 0)
    assert is_symmetric(g)
    expected = {(min(u, v), max(u, v)) for u, v in pairs if u != v}
    src, dst = g.undirected_edges()
    assert set(zip(src.tolist(), dst.tolist())) == expected
    for u in range(n):
        nb = g.neighbors_of(u)
        assert np.all(np.diff(nb) > 0) and not np.any(nb == u)


def test_torus_ring():
    g = torus(4, 1)
    assert g.n == 4 and np.all(g.degrees == 2)
    assert g.neighbors_of(0).tolist() == [1, 3]
    g3 = torus(5, 3)
    assert g3.n == 125 and np.all(g3.degrees == 6)


def test_generators():
    assert erdos_renyi(100, p=0.0).m == 0
    g = erdos_renyi(1000, avg_deg=10, seed=1)
    assert is_symmetric(g)
    assert 8 < g.m / g.n < 12
    # the BFS oracle count matches an independent union-find count
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for u, v in zip(*[a.tolist() for a in g.undirected_edges()]):
        parent[find(u)] = find(v)
    roots = {find(x) for x in range(g.n)}
    assert len(roots) == len(set(bfs_oracle(g).tolist()))


def test_generators_deterministic():
    for model, params in (("erdos_renyi", {"n": 300, "avg_deg": 5}), ("barabasi_albert", {"n": 300, "edges_per_vertex": 3})):
        a = generate_graph(model, seed=9, **params)
        b = generate_graph(model, seed=9, **params)
        assert np.array_equal(a.neighbors, b.neighbors) and np.array_equal(a.offsets, b.offsets)
    assert not np.array_equal(erdos_renyi(300, avg_deg=5, seed=1).neighbors, erdos_renyi(300, avg_deg=5, seed=2).neighbors)


def test_barabasi_albert_degrees():
    g = barabasi_albert(500, 4, seed=0)
    assert is_symmetric(g)
    assert g.m == 2 * 4 * (500 - 4)
    assert g.degrees.min() >= 4
    assert len(set(bfs_oracle(g).tolist())) == 1


def test_generator_errors():
    with pytest.raises(ValueError):
        erdos_renyi(10, p=1.5)
    with pytest.raises(ValueError):
        erdos_renyi(10)
    with pytest.raises(ValueError):
        torus(0, 2)
    with pytest.raises(ValueError):
        barabasi_albert(3, 5)
    with pytest.raises(ValueError):
        generate_graph("grid")


def test_graph_offsets_validated():
    with pytest.raises(ValueError):
        Graph(3, np.array([0, 1]), np.array([0]))
