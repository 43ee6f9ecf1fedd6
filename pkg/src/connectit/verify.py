"""Built-in fixtures and independent correctness checks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import EdgeList, Graph, barabasi_albert, erdos_renyi, symmetrize, torus

__all__ = [
    "COUNTER_EXAMPLE_EDGES",
    "counter_example_graph",
    "fixture_graphs",
    "small_fixture_graphs",
    "seeded_er_graphs",
    "forest_problems",
    "GridOutcome",
]

# six vertices, one component; the classic trace against splice + full compression
COUNTER_EXAMPLE_EDGES = [(0, 2), (1, 3), (2, 5), (3, 4), (4, 5)]


def counter_example_graph() -> Graph:
    return symmetrize(EdgeList.from_pairs(COUNTER_EXAMPLE_EDGES, n=6), 6)


def _from_pairs(pairs, n) -> Graph:
    return symmetrize(EdgeList.from_pairs(pairs, n=n), n) if pairs else symmetrize((np.empty(0, np.int64), np.empty(0, np.int64)), n)


def fixture_graphs() -> dict[str, Graph]:
    """The twelve named fixtures used by the grid and forest suites."""
    return {
        "counter_example": counter_example_graph(),
        "edgeless": _from_pairs([], 16),
        "path": _from_pairs([(i, i + 1) for i in range(31)], 32),
        "two_triangles": _from_pairs([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], 6),
        "cycle4": _from_pairs([(0, 1), (1, 2), (2, 3), (3, 0)], 4),
        "k8": _from_pairs([(i, j) for i in range(8) for j in range(i + 1, 8)], 8),
        "torus_d1": torus(64, 1),
        "torus_d2": torus(16, 2),
        "torus_d3": torus(8, 3),
        "er_2000_deg2": erdos_renyi(2000, avg_deg=2, seed=11),
        "er_2000_deg8": erdos_renyi(2000, avg_deg=8, seed=12),
        "ba_2000_deg4": barabasi_albert(2000, 4, seed=13),
    }


def small_fixture_graphs() -> dict[str, Graph]:
    """Fixtures cheap enough for quick CLI verification."""
    full = fixture_graphs()
    return {k: v for k, v in full.items() if v.n <= 512}


def seeded_er_graphs(count: int = 20, base_seed: int = 1000) -> dict[str, Graph]:
    """Random graphs of varied size and density around the connectivity threshold."""
    out = {}
    for i in range(count):
        seed = base_seed + i
        rng = np.random.default_rng(seed)
        n = int(rng.integers(50, 800))
        deg = float(rng.uniform(0.5, 6.0))
        out[f"er_seed{seed}_n{n}"] = erdos_renyi(n, avg_deg=deg, seed=seed)
    return out


def _partition_of(n: int, src, dst) -> np.ndarray:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in zip(src, dst):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    roots = np.asarray([find(x) for x in range(n)], dtype=np.int64)
    mins = np.full(n, n, dtype=np.int64)
    np.minimum.at(mins, roots, np.arange(n, dtype=np.int64))
    return mins[roots] if n else roots


def forest_problems(graph: Graph, forest: np.ndarray, oracle: np.ndarray | None = None) -> list[str]:
    """Everything wrong with ``forest`` as a spanning forest of ``graph`` (empty when valid).

    Checks edge membership, the size n - c, acyclicity by replaying the
    edges through a sequential union-find, and that the forest induces the
    graph's partition.
    """
    from .driver import bfs_oracle

    problems = []
    n = graph.n
    oracle = bfs_oracle(graph) if oracle is None else oracle
    comps = int(np.unique(oracle).shape[0]) if n else 0
    forest = np.asarray(forest, dtype=np.int64).reshape(-1, 2)
    if forest.size and (forest.min() < 0 or forest.max() >= n):
        return [f"forest names a vertex outside [0, {n})"]
    if forest.shape[0] != n - comps:
        problems.append(f"forest has {forest.shape[0]} edges, expected n - c = {n - comps}")
    edge_set = set(zip(graph.sources.tolist(), graph.neighbors.tolist()))
    for u, v in forest.tolist():
        if (u, v) not in edge_set:
            problems.append(f"({u}, {v}) is not a graph edge")
            break
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in forest.tolist():
        ru, rv = find(u), find(v)
        if ru == rv:
            problems.append(f"cycle closed by ({u}, {v})")
            break
        parent[ru] = rv
    induced = _partition_of(n, forest[:, 0].tolist(), forest[:, 1].tolist())
    if not np.array_equal(induced, oracle):
        problems.append("forest partition differs from the graph partition")
    return problems


@dataclass
class GridOutcome:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures
