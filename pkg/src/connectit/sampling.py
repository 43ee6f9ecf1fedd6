"""Sampling phases producing height-one partial labelings.

Every sampler takes a Graph and returns a :class:`SampleResult` whose labels
satisfy ``labels[labels[v]] == labels[v]`` and only ever join vertices that
are connected in the graph.  In forest mode each non-root vertex ends up
owning the graph edge that attached it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .atomics import ForestEdges, ParentArray
from .graph import Graph
from .parallel import parallel_for, resolve_workers
from .labels import full_shortcut
from .unionfind import DEFAULT_UF, UnionFindSpec, make_unite

__all__ = [
    "SCHEMES",
    "KOUT_VARIANTS",
    "SamplingSpec",
    "SampleResult",
    "kout_sample",
    "bfs_sample",
    "ldd_sample",
    "sample",
    "identify_frequent",
    "inter_component_edges",
]

SCHEMES = ("none", "kout", "bfs", "ldd")
KOUT_VARIANTS = ("afforest", "pure", "hybrid", "maxdeg")


@dataclass(frozen=True)
class SamplingSpec:
    scheme: str = "none"
    kout_k: int = 2
    kout_variant: str = "hybrid"
    bfs_rounds: int = 3
    bfs_threshold: float = 0.10
    ldd_beta: float = 0.2
    ldd_permute: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown sampling scheme {self.scheme!r}; choose from {', '.join(SCHEMES)}")
        if self.kout_k < 1:
            raise ValueError("kout_k must be >= 1")
        if self.kout_variant not in KOUT_VARIANTS:
            raise ValueError(f"unknown k-out variant {self.kout_variant!r}")
        if self.bfs_rounds < 1:
            raise ValueError("bfs_rounds must be >= 1")
        if not 0.0 <= self.bfs_threshold <= 1.0:
            raise ValueError("bfs_threshold must lie in [0, 1]")
        if not 0.0 < self.ldd_beta < 1.0:
            raise ValueError("ldd_beta must lie in (0, 1)")

    # parameters that belong to each scheme, for compact spec strings
    _OWN = {
        "kout": ("kout_k", "kout_variant"),
        "bfs": ("bfs_rounds", "bfs_threshold"),
        "ldd": ("ldd_beta", "ldd_permute"),
        "none": (),
    }

    def to_string(self) -> str:
        """``scheme`` plus any non-default own parameters, e.g. ``kout[k=3,variant=pure]``."""
        default = SamplingSpec(self.scheme)
        parts = []
        for name in self._OWN[self.scheme]:
            value = getattr(self, name)
            if value != getattr(default, name):
                parts.append(f"{name.split('_', 1)[1]}={_fmt(value)}")
        return self.scheme + (f"[{','.join(parts)}]" if parts else "")

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "SamplingSpec":
        text = text.strip()
        params = {}
        if "[" in text:
            if not text.endswith("]"):
                raise ValueError(f"malformed sampling spec {text!r}")
            text, raw = text[:-1].split("[", 1)
            for item in filter(None, (p.strip() for p in raw.split(","))):
                key, _, value = item.partition("=")
                params[f"{text}_{key.strip()}"] = value.strip()
        if text not in SCHEMES:
            raise ValueError(f"unknown sampling scheme {text!r}; choose from {', '.join(SCHEMES)}")
        types = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for key, value in params.items():
            if key not in cls._OWN[text]:
                raise ValueError(f"parameter {key.split('_', 1)[1]!r} does not apply to {text}")
            kwargs[key] = _coerce(types[key], value)
        return cls(scheme=text, seed=seed, **kwargs)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _coerce(type_name: str, value: str):
    if type_name == "bool":
        if value.lower() in ("true", "1", "yes"):
            return True
        if value.lower() in ("false", "0", "no"):
            return False
        raise ValueError(f"expected a boolean, got {value!r}")
    if type_name == "int":
        return int(value)
    if type_name == "float":
        return float(value)
    return value


@dataclass
class SampleResult:
    labels: np.ndarray
    forest: ForestEdges | None = None
    stats: dict = field(default_factory=dict)


def _coverage(labels: np.ndarray) -> float:
    n = labels.shape[0]
    if n == 0:
        return 0.0
    return float(np.bincount(labels, minlength=n).max()) / n


# ----------------------------------------------------------------- k-out

def select_kout_edges(graph: Graph, k: int, variant: str, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """The (vertex, neighbor) pairs chosen by a k-out variant."""
    deg = graph.degrees
    verts = np.flatnonzero(deg > 0)
    if verts.shape[0] == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    vdeg = deg[verts]
    offs = graph.offsets
    nbr = graph.neighbors
    owners: list[np.ndarray] = []
    targets: list[np.ndarray] = []

    def take_random(count: int) -> None:
        for _ in range(count):
            pos = (rng.random(verts.shape[0]) * vdeg).astype(np.int64)
            owners.append(verts)
            targets.append(nbr[offs[verts] + pos])

    if variant == "afforest":
        for j in range(k):
            ok = vdeg > j
            owners.append(verts[ok])
            targets.append(nbr[offs[verts[ok]] + j])
    elif variant == "pure":
        take_random(k)
    elif variant == "hybrid":
        owners.append(verts)
        targets.append(nbr[offs[verts]])
        take_random(k - 1)
    elif variant == "maxdeg":
        n = graph.n
        # larger degree wins, then smaller id
        key = deg[nbr] * (n + 1) + (n - nbr)
        best = np.maximum.reduceat(key, offs[verts])
        owners.append(verts)
        targets.append(n - best % (n + 1))
        take_random(k - 1)
    else:
        raise ValueError(f"unknown k-out variant {variant!r}")
    return np.concatenate(owners), np.concatenate(targets)


def kout_sample(
    graph: Graph,
    spec: SamplingSpec | None = None,
    forest: ForestEdges | None = None,
    workers: int | None = 1,
    uf_spec: UnionFindSpec = DEFAULT_UF,
) -> SampleResult:
    spec = spec or SamplingSpec("kout")
    if spec.kout_k < 1:
        raise ValueError("kout_k must be >= 1")
    t0 = time.perf_counter()
    rng = np.random.default_rng(spec.seed)
    src, dst = select_kout_edges(graph, spec.kout_k, spec.kout_variant, rng)
    P = ParentArray(graph.n)
    unite = make_unite(uf_spec, P, forest=forest, seed=spec.seed)
    us, vs = src.tolist(), dst.tolist()

    def body(lo, hi):
        for i in range(lo, hi):
            unite(us[i], vs[i])

    parallel_for(len(us), body, workers)
    # fully compress to height one
    labels = full_shortcut(P.to_numpy())
    return SampleResult(labels, forest, {
        "scheme": "kout",
        "sampled_edges": len(us),
        "coverage": _coverage(labels),
        "time_s": time.perf_counter() - t0,
    })


# ------------------------------------------------------------------- BFS

def expand_frontier(graph: Graph, frontier: np.ndarray):
    """All (parent, child) candidate pairs leaving ``frontier``."""
    offs = graph.offsets
    starts = offs[frontier]
    counts = offs[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    base = np.repeat(starts - np.concatenate(([0], np.cumsum(counts)[:-1])), counts)
    idx = base + np.arange(total, dtype=np.int64)
    return np.repeat(frontier, counts), graph.neighbors[idx]


def bfs_tree(graph: Graph, source: int, direction_optimize: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """BFS from ``source``; returns (visited mask, parent array with -1 for unreached/source).

    Each newly reached vertex takes its smallest-id frontier neighbor as parent,
    so the top-down and bottom-up steps build the same tree.
    """
    n = graph.n
    visited = np.zeros(n, dtype=bool)
    parent = np.full(n, -1, dtype=np.int64)
    visited[source] = True
    frontier = np.array([source], dtype=np.int64)
    src_all = graph.sources if direction_optimize else None
    while frontier.shape[0]:
        frontier_edges = int(graph.degrees[frontier].sum())
        if direction_optimize and frontier_edges > graph.m // 20:
            in_frontier = np.zeros(n, dtype=bool)
            in_frontier[frontier] = True
            hit = in_frontier[graph.neighbors] & ~visited[src_all]
            child, par = src_all[hit], graph.neighbors[hit]
        else:
            par, child = expand_frontier(graph, frontier)
            fresh = ~visited[child]
            par, child = par[fresh], child[fresh]
        if child.shape[0] == 0:
            break
        order = np.lexsort((par, child))
        child, par = child[order], par[order]
        first = np.concatenate(([True], child[1:] != child[:-1]))
        child, par = child[first], par[first]
        visited[child] = True
        parent[child] = par
        frontier = child
    return visited, parent


def bfs_sample(
    graph: Graph,
    spec: SamplingSpec | None = None,
    forest: ForestEdges | None = None,
    workers: int | None = 1,
    direction_optimize: bool = False,
) -> SampleResult:
    spec = spec or SamplingSpec("bfs")
    t0 = time.perf_counter()
    n = graph.n
    labels = np.arange(n, dtype=np.int64)
    if n == 0:
        return SampleResult(labels, forest, {"scheme": "bfs", "attempts": 0, "coverage": 0.0, "success": False})
    rng = np.random.default_rng(spec.seed)
    attempts = 0
    for attempt in range(spec.bfs_rounds):
        attempts += 1
        s = int(rng.integers(0, n))
        visited, parent = bfs_tree(graph, s, direction_optimize)
        coverage = float(visited.sum()) / n
        if coverage > spec.bfs_threshold:
            labels[visited] = s
            if forest is not None:
                for child in np.flatnonzero(parent >= 0).tolist():
                    forest.record(child, int(parent[child]), child)
            return SampleResult(labels, forest, {
                "scheme": "bfs", "attempts": attempts, "source": s, "success": True,
                "coverage": coverage, "time_s": time.perf_counter() - t0,
            })
    return SampleResult(labels, forest, {
        "scheme": "bfs", "attempts": attempts, "success": False,
        "coverage": 1.0 / n, "time_s": time.perf_counter() - t0,
    })


# ------------------------------------------------------------------- LDD

def ldd_shifts(n: int, beta: float, permute: bool, rng: np.random.Generator) -> np.ndarray:
    """Exponential(beta) shifts, sorted descending and dealt out in vertex order
    (or over a random permutation)."""
    # inverse transform of the exponential CDF
    u = rng.random(n)
    delta = -np.log1p(-u) / beta
    delta[::-1].sort()
    if permute:
        out = np.empty(n)
        out[rng.permutation(n)] = delta
        return out
    return delta


def ldd_sample(
    graph: Graph,
    spec: SamplingSpec | None = None,
    forest: ForestEdges | None = None,
    workers: int | None = 1,
) -> SampleResult:
    spec = spec or SamplingSpec("ldd")
    beta = spec.ldd_beta
    if not 0.0 < beta < 1.0:
        raise ValueError("ldd_beta must lie in (0, 1)")
    t0 = time.perf_counter()
    n = graph.n
    labels = np.arange(n, dtype=np.int64)
    if n == 0:
        return SampleResult(labels, forest, {"scheme": "ldd", "clusters": 0, "coverage": 0.0})
    rng = np.random.default_rng(spec.seed)
    delta = ldd_shifts(n, beta, spec.ldd_permute, rng)
    start = np.floor(delta.max() - delta).astype(np.int64)
    by_start = np.argsort(start, kind="stable")
    start_sorted = start[by_start]
    covered = np.zeros(n, dtype=bool)
    parent = np.full(n, -1, dtype=np.int64)
    frontier = np.empty(0, dtype=np.int64)
    ptr, rnd, remaining = 0, 0, n
    while remaining:
        if frontier.shape[0]:
            par, child = expand_frontier(graph, frontier)
            fresh = ~covered[child]
            par, child = par[fresh], child[fresh]
            if child.shape[0]:
                # smaller center wins, then smaller parent
                order = np.lexsort((par, labels[par], child))
                child, par = child[order], par[order]
                first = np.concatenate(([True], child[1:] != child[:-1]))
                child, par = child[first], par[first]
                covered[child] = True
                labels[child] = labels[par]
                parent[child] = par
                remaining -= child.shape[0]
            frontier = child
        # uncovered vertices whose start time has come become centers
        hi = int(np.searchsorted(start_sorted, rnd, side="right"))
        if hi > ptr:
            cand = by_start[ptr:hi]
            ptr = hi
            centers = cand[~covered[cand]]
            covered[centers] = True
            remaining -= centers.shape[0]
            frontier = np.concatenate([frontier, centers])
        rnd += 1
    if forest is not None:
        for child in np.flatnonzero(parent >= 0).tolist():
            forest.record(child, int(parent[child]), child)
    return SampleResult(labels, forest, {
        "scheme": "ldd",
        "clusters": int(np.unique(labels).shape[0]),
        "rounds": rnd,
        "coverage": _coverage(labels),
        "time_s": time.perf_counter() - t0,
    })


# ----------------------------------------------------------------- misc

def no_sample(graph: Graph, spec=None, forest=None, workers=1) -> SampleResult:
    return SampleResult(np.arange(graph.n, dtype=np.int64), forest, {"scheme": "none", "coverage": 1.0 / max(graph.n, 1)})


def sample(graph: Graph, spec: SamplingSpec, forest: ForestEdges | None = None, workers: int | None = 1) -> SampleResult:
    workers = resolve_workers(workers)
    fn = {"none": no_sample, "kout": kout_sample, "bfs": bfs_sample, "ldd": ldd_sample}[spec.scheme]
    return fn(graph, spec, forest=forest, workers=workers)


def identify_frequent(labels, sample_count: int = 1024, seed: int = 0, exact: bool = False) -> int | None:
    """Most frequent label among ``sample_count`` random slots (exact when n is small)."""
    labels = np.asarray(labels, dtype=np.int64)
    n = labels.shape[0]
    if n == 0:
        return None
    if exact or n <= sample_count:
        picked = labels
    else:
        picked = labels[np.random.default_rng(seed).integers(0, n, size=sample_count)]
    values, counts = np.unique(picked, return_counts=True)
    # ties go to the smallest label
    return int(values[np.argmax(counts)])


def inter_component_edges(graph: Graph, labels) -> int:
    """Undirected edges whose endpoints carry different labels."""
    labels = np.asarray(labels)
    src, dst = graph.undirected_edges()
    return int(np.count_nonzero(labels[src] != labels[dst]))


def with_seed(spec: SamplingSpec, seed: int) -> SamplingSpec:
    return replace(spec, seed=seed)
