"""Graph representations, loaders and generators.

Graphs are immutable symmetric CSR structures.  Every algorithm in the
package reads them concurrently; nothing mutates one after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

__all__ = [
    "Graph",
    "EdgeList",
    "GraphFormatError",
    "load_adjacency_graph",
    "write_adjacency_graph",
    "load_edge_list",
    "symmetrize",
    "generate_graph",
    "erdos_renyi",
    "torus",
    "barabasi_albert",
    "is_symmetric",
]

ADJACENCY_HEADER = "AdjacencyGraph"


class GraphFormatError(ValueError):
    """Raised when a graph file cannot be parsed."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Symmetric graph in compressed-sparse-row layout.

    ``neighbors[offsets[u]:offsets[u + 1]]`` are the targets of ``u``.
    """

    n: int
    offsets: np.ndarray
    neighbors: np.ndarray

    def __post_init__(self) -> None:
        offsets = np.ascontiguousarray(self.offsets, dtype=np.int64)
        neighbors = np.ascontiguousarray(self.neighbors, dtype=np.int64)
        if offsets.shape != (self.n + 1,):
            raise ValueError(f"offsets must have n+1={self.n + 1} entries, got {offsets.shape[0]}")
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "neighbors", neighbors)

    @property
    def m(self) -> int:
        """Number of directed edges."""
        return int(self.neighbors.shape[0])

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    @cached_property
    def sources(self) -> np.ndarray:
        """Source vertex of every directed edge (COO view of the CSR)."""
        return np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)

    @cached_property
    def adjacency(self) -> list[list[int]]:
        # python lists are much faster than numpy scalars in per-edge loops
        nbrs = self.neighbors.tolist()
        offs = self.offsets.tolist()
        return [nbrs[offs[u]:offs[u + 1]] for u in range(self.n)]

    def neighbors_of(self, u: int) -> np.ndarray:
        return self.neighbors[self.offsets[u]:self.offsets[u + 1]]

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """All directed edges as ``(src, dst)`` arrays."""
        return self.sources, self.neighbors

    def undirected_edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Each undirected edge once, with ``src < dst``."""
        src, dst = self.sources, self.neighbors
        keep = src < dst
        return src[keep], dst[keep]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(eq=False)
class EdgeList:
    """Ordered list of (possibly weighted) edges."""

    src: np.ndarray
    dst: np.ndarray
    weights: np.ndarray | None = None
    n: int | None = field(default=None)

    def __post_init__(self) -> None:
        self.src = np.asarray(self.src, dtype=np.int64).reshape(-1)
        self.dst = np.asarray(self.dst, dtype=np.int64).reshape(-1)
        if self.src.shape != self.dst.shape:
            raise ValueError("src and dst must have equal length")
        if self.weights is not None:
            self.weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)
            if self.weights.shape != self.src.shape:
                raise ValueError("weights must match the number of edges")
        if len(self.src) and min(self.src.min(), self.dst.min()) < 0:
            raise ValueError("negative vertex id")
        if self.n is None:
            self.n = self.max_vertex() + 1
        elif len(self.src) and self.max_vertex() >= self.n:
            raise ValueError(f"vertex id {self.max_vertex()} out of range for n={self.n}")

    @classmethod
    def from_pairs(cls, pairs, n: int | None = None, weights=None) -> "EdgeList":
        arr = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
        return cls(arr[:, 0], arr[:, 1], weights=weights, n=n)

    def __len__(self) -> int:
        return int(self.src.shape[0])

    def max_vertex(self) -> int:
        if not len(self.src):
            return -1
        return int(max(self.src.max(), self.dst.max()))

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.src.tolist(), self.dst.tolist()))

    @property
    def weighted(self) -> bool:
        return self.weights is not None

    def take(self, idx) -> "EdgeList":
        w = None if self.weights is None else self.weights[idx]
        return EdgeList(self.src[idx], self.dst[idx], weights=w, n=self.n)


def _tokens(path: Path):
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            for tok in line.split():
                yield lineno, tok


def load_adjacency_graph(path: str | Path) -> Graph:
    """Read the text ``AdjacencyGraph`` format (one token per line).

    Symmetry is not validated; use :func:`is_symmetric` for that.
    """
    path = Path(path)
    it = _tokens(path)

    def take(what: str) -> tuple[int, str]:
        try:
            return next(it)
        except StopIteration:
            raise GraphFormatError(f"{path}: unexpected end of file while reading {what}") from None

    def take_int(what: str) -> int:
        lineno, tok = take(what)
        try:
            value = int(tok)
        except ValueError:
            raise GraphFormatError(f"{path}:{lineno}: expected integer {what}, got {tok!r}") from None
        if value < 0:
            raise GraphFormatError(f"{path}:{lineno}: negative {what} {value}")
        return value

    lineno, header = take("header")
    if header != ADJACENCY_HEADER:
        raise GraphFormatError(f"{path}:{lineno}: bad header {header!r}, expected {ADJACENCY_HEADER!r}")
    n = take_int("vertex count")
    m = take_int("edge count")
    offsets = np.empty(n + 1, dtype=np.int64)
    for i in range(n):
        offsets[i] = take_int("offset")
    offsets[n] = m
    targets = np.empty(m, dtype=np.int64)
    for i in range(m):
        lineno, tok = next(it, (None, None))
        if tok is None:
            raise GraphFormatError(f"{path}: edge count mismatch: header declares {m}, file has {i}")
        try:
            t = int(tok)
        except ValueError:
            raise GraphFormatError(f"{path}:{lineno}: expected integer edge target, got {tok!r}") from None
        if not 0 <= t < n:
            raise GraphFormatError(f"{path}:{lineno}: edge target {t} out of range [0, {n})")
        targets[i] = t
    extra = next(it, None)
    if extra is not None:
        raise GraphFormatError(f"{path}:{extra[0]}: edge count mismatch: more than {m} edge targets")
    if n and (offsets[0] != 0 or np.any(np.diff(offsets) < 0)):
        raise GraphFormatError(f"{path}: offsets must start at 0 and be nondecreasing")
    return Graph(n, offsets, targets)


def write_adjacency_graph(graph: Graph, path: str | Path) -> None:
    lines = [ADJACENCY_HEADER, str(graph.n), str(graph.m)]
    lines.extend(map(str, graph.offsets[:-1].tolist()))
    lines.extend(map(str, graph.neighbors.tolist()))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_edge_list(path: str | Path, n_hint: int | None = None) -> EdgeList:
    """Read ``u v`` or ``u v w`` lines; ``#`` starts a comment line.

    Input order is preserved (streaming replays depend on it).
    """
    path = Path(path)
    src: list[int] = []
    dst: list[int] = []
    weights: list[float] = []
    weighted = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise GraphFormatError(f"{path}:{lineno}: expected 'u v' or 'u v w', got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphFormatError(f"{path}:{lineno}: non-integer vertex id in {line!r}") from None
            if u < 0 or v < 0:
                raise GraphFormatError(f"{path}:{lineno}: negative vertex id in {line!r}")
            is_weighted = len(parts) == 3
            if weighted is None:
                weighted = is_weighted
            elif weighted != is_weighted:
                raise GraphFormatError(f"{path}:{lineno}: mixed weighted and unweighted lines")
            if is_weighted:
                try:
                    weights.append(float(parts[2]))
                except ValueError:
                    raise GraphFormatError(f"{path}:{lineno}: bad weight {parts[2]!r}") from None
            src.append(u)
            dst.append(v)
    w = np.asarray(weights, dtype=np.float64) if weighted else None
    try:
        return EdgeList(np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64), weights=w, n=n_hint)
    except ValueError as exc:
        raise GraphFormatError(f"{path}: {exc}") from None


def symmetrize(edges: EdgeList | tuple[np.ndarray, np.ndarray], n: int) -> Graph:
    """Build a CSR graph with both directions of every edge.

    Self-loops and duplicates are dropped and neighbor lists come out sorted.
    """
    if isinstance(edges, EdgeList):
        src, dst = edges.src, edges.dst
    else:
        src, dst = (np.asarray(a, dtype=np.int64) for a in edges)
    if len(src) and max(int(src.max()), int(dst.max())) >= n:
        raise ValueError(f"edge endpoint out of range for n={n}")
    keep = src != dst
    src, dst = src[keep], dst[keep]
    both_src = np.concatenate([src, dst])
    both_dst = np.concatenate([dst, src])
    keys = np.unique(both_src * np.int64(max(n, 1)) + both_dst)
    out_src = keys // max(n, 1)
    out_dst = keys % max(n, 1)
    counts = np.bincount(out_src, minlength=n) if n else np.zeros(0, dtype=np.int64)
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    return Graph(n, offsets, out_dst)


def is_symmetric(graph: Graph) -> bool:
    src, dst = graph.edge_arrays()
    n = max(graph.n, 1)
    fwd = np.sort(src * n + dst)
    rev = np.sort(dst * n + src)
    return bool(np.array_equal(fwd, rev))


def erdos_renyi(n: int, p: float | None = None, avg_deg: float | None = None, seed: int = 0) -> Graph:
    """G(n, p) random graph; ``avg_deg`` sets ``p = avg_deg / (n - 1)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if (p is None) == (avg_deg is None):
        raise ValueError("give exactly one of p or avg_deg")
    if p is None:
        if avg_deg < 0:
            raise ValueError("avg_deg must be nonnegative")
        p = avg_deg / (n - 1) if n > 1 else 0.0
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability {p} outside [0, 1]")
    rng = np.random.default_rng(seed)
    pairs_total = n * (n - 1) // 2
    target = int(rng.binomial(pairs_total, p)) if pairs_total else 0
    keys = np.empty(0, dtype=np.int64)
    # rejection sampling of distinct unordered pairs; O(target) memory
    while keys.shape[0] < target:
        need = target - keys.shape[0]
        a = rng.integers(0, n, size=need + need // 8 + 16)
        b = rng.integers(0, n, size=a.shape[0])
        ok = a != b
        lo, hi = np.minimum(a[ok], b[ok]), np.maximum(a[ok], b[ok])
        fresh = lo * n + hi
        pool = np.concatenate([keys, fresh])
        _, first = np.unique(pool, return_index=True)
        # first occurrences in draw order keeps the result seed-stable
        keys = pool[np.sort(first)][:target]
    return symmetrize((keys // max(n, 1), keys % max(n, 1)), n)


def torus(side: int, d: int) -> Graph:
    """d-dimensional torus with ``side`` vertices per dimension (2d neighbors each)."""
    if side < 1 or d < 1:
        raise ValueError("side and d must be positive")
    n = side ** d
    ids = np.arange(n, dtype=np.int64)
    coords = np.stack(np.unravel_index(ids, (side,) * d), axis=1)
    src, dst = [], []
    for axis in range(d):
        shifted = coords.copy()
        shifted[:, axis] = (shifted[:, axis] + 1) % side
        src.append(ids)
        dst.append(np.ravel_multi_index(tuple(shifted.T), (side,) * d).astype(np.int64))
    return symmetrize((np.concatenate(src), np.concatenate(dst)), n)


def barabasi_albert(n: int, edges_per_vertex: int, seed: int = 0) -> Graph:
    """Preferential attachment: each new vertex links to ``edges_per_vertex`` distinct earlier vertices."""
    k = edges_per_vertex
    if k < 1 or n < k + 1:
        raise ValueError("need edges_per_vertex >= 1 and n > edges_per_vertex")
    rng = np.random.default_rng(seed)
    src: list[int] = []
    dst: list[int] = []
    # initial star: vertex k attaches to 0..k-1
    repeated: list[int] = []
    for t in range(k):
        src.append(k)
        dst.append(t)
        repeated.extend((k, t))
    for v in range(k + 1, n):
        chosen: set[int] = set()
        while len(chosen) < k:
            draws = rng.integers(0, len(repeated), size=k - len(chosen))
            chosen.update(repeated[i] for i in draws.tolist())
        for t in sorted(chosen):
            src.append(v)
            dst.append(t)
            repeated.extend((v, t))
    return symmetrize((np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64)), n)


def generate_graph(model: str, seed: int = 0, **params) -> Graph:
    """Dispatch to a generator by name: ``erdos_renyi``, ``torus`` or ``barabasi_albert``."""
    if model in ("erdos_renyi", "er"):
        return erdos_renyi(params.pop("n"), seed=seed, **params)
    if model == "torus":
        return torus(params["side"], params["d"])
    if model in ("barabasi_albert", "ba"):
        return barabasi_albert(params["n"], params.get("edges_per_vertex", params.get("m", 1)), seed=seed)
    raise ValueError(f"unknown graph model {model!r}")
