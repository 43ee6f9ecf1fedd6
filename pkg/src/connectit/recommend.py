"""Decision-tree guidance for picking a sampling + finish combination.

The finish is always uf_rem_cas with find_naive (any splice works; we
emit split_atomic_one).  Sampling depends on density and diameter:
very sparse graphs (m/n < 3, with m counting directed edges) skip
sampling, low-diameter graphs use LDD, everything else uses k-out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .sampling import expand_frontier

__all__ = ["GraphStats", "graph_stats", "estimate_diameter", "is_low_diameter", "recommend", "RECOMMENDED_FINISH"]

RECOMMENDED_FINISH = "uf_rem_cas;split_atomic_one;find_naive"
SPARSE_RATIO = 3.0


@dataclass(frozen=True)
class GraphStats:
    n: int
    m: int
    diameter: int | None = None

    @property
    def density(self) -> float:
        return self.m / self.n if self.n else 0.0


def _eccentricity(graph: Graph, source: int) -> tuple[int, int]:
    """(BFS depth from ``source``, smallest vertex on the deepest level)."""
    visited = np.zeros(graph.n, dtype=bool)
    visited[source] = True
    frontier = np.array([source], dtype=np.int64)
    depth = 0
    while True:
        _, child = expand_frontier(graph, frontier)
        child = np.unique(child[~visited[child]])
        if child.shape[0] == 0:
            return depth, int(frontier.min())
        visited[child] = True
        frontier = child
        depth += 1


def estimate_diameter(graph: Graph, seed: int = 0) -> int:
    """Double-sweep lower bound on the diameter of the component holding the
    highest-degree vertex (a random vertex when there are no edges)."""
    if graph.n == 0:
        return 0
    rng = np.random.default_rng(seed)
    start = int(np.argmax(graph.degrees)) if graph.m else int(rng.integers(0, graph.n))
    _, far = _eccentricity(graph, start)
    ecc, _ = _eccentricity(graph, far)
    return ecc


def graph_stats(graph: Graph, seed: int = 0) -> GraphStats:
    return GraphStats(graph.n, graph.m, estimate_diameter(graph, seed))


def is_low_diameter(n: int, diameter: int) -> bool:
    return diameter <= 2 * math.ceil(math.log2(max(n, 2)))


def recommend(stats: GraphStats | Graph) -> str:
    """A spec string ``"<sampling> + <finish>"`` for the given statistics."""
    if isinstance(stats, Graph):
        stats = graph_stats(stats)
    if stats.n == 0 or stats.density < SPARSE_RATIO:
        sampling = "none"
    elif stats.diameter is not None and is_low_diameter(stats.n, stats.diameter):
        sampling = "ldd"
    else:
        sampling = "kout"
    return f"{sampling} + {RECOMMENDED_FINISH}"
