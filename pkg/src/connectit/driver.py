"""Two-phase connectivity: sample, pick the frequent label, finish.

Also spanning forest, canonical labels and the sequential BFS oracle.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .atomics import ForestEdges, ParentArray
from .graph import Graph
from .labels import canonicalize, full_shortcut, reroot_at_min
from .minbased import LT_VARIANTS, MIN_BASED_FINISHES, LiuTarjanSpec, RoundInfo, run_min_based
from .parallel import parallel_for, resolve_workers
from .sampling import SCHEMES, SamplingSpec, identify_frequent, sample
from .unionfind import SpecError, UnionFindSpec, all_union_find_specs, make_unite

__all__ = [
    "AlgorithmSpec",
    "ComponentReport",
    "connectivity",
    "spanning_forest",
    "canonicalize",
    "bfs_oracle",
    "all_algorithm_specs",
    "all_finish_names",
    "label_checksum",
    "finish_union_find",
    "AUTO",
]

AUTO = "auto"


def all_finish_names() -> list[str]:
    names = [s.to_string() for s in all_union_find_specs()]
    names += [f"lt_{v.lower()}" for v in LT_VARIANTS]
    names += list(MIN_BASED_FINISHES)
    return names


def _normalize_finish(text: str) -> tuple[str, UnionFindSpec | None, LiuTarjanSpec | None]:
    text = text.strip()
    low = text.lower()
    if low.startswith("lt_"):
        lt = LiuTarjanSpec.from_name(low[3:])
        return f"lt_{lt.name.lower()}", None, lt
    if low in MIN_BASED_FINISHES:
        return low, None, None
    if "uf_" in low or ";" in low:
        uf = UnionFindSpec.parse(low)
        return uf.to_string(), uf, None
    raise SpecError(f"unknown finish {text!r}; expected a union-find spec, lt_<variant>, stergiou, sv or label_prop")


@dataclass(frozen=True)
class AlgorithmSpec:
    """A sampling scheme paired with a finish method."""

    sampling: SamplingSpec
    finish: str

    def __post_init__(self):
        name, _, _ = _normalize_finish(self.finish)
        object.__setattr__(self, "finish", name)

    @property
    def union_find(self) -> UnionFindSpec | None:
        return _normalize_finish(self.finish)[1]

    @property
    def liu_tarjan(self) -> LiuTarjanSpec | None:
        return _normalize_finish(self.finish)[2]

    @property
    def finish_kind(self) -> str:
        if self.union_find is not None:
            return "union_find"
        if self.liu_tarjan is not None:
            return "liu_tarjan"
        return self.finish

    @property
    def root_based(self) -> bool:
        kind = self.finish_kind
        if kind in ("union_find", "sv"):
            return True
        if kind == "liu_tarjan":
            return self.liu_tarjan.root_based
        return False

    def to_string(self) -> str:
        return f"{self.sampling.to_string()} + {self.finish}"

    __str__ = to_string

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "AlgorithmSpec":
        """``"<sampling> + <finish>"`` or a bare finish (no sampling)."""
        if "+" in text:
            samp, _, fin = text.partition("+")
            return cls(SamplingSpec.parse(samp, seed=seed), fin.strip())
        return cls(SamplingSpec("none", seed=seed), text.strip())

    def with_sampling(self, sampling: SamplingSpec) -> "AlgorithmSpec":
        return AlgorithmSpec(sampling, self.finish)


def all_algorithm_specs(schemes=SCHEMES, seed: int = 0) -> list[AlgorithmSpec]:
    return [AlgorithmSpec(SamplingSpec(s, seed=seed), f) for s in schemes for f in all_finish_names()]


@dataclass
class ComponentReport:
    num_components: int
    largest_size: int
    canonical_labels: np.ndarray
    timings: dict = field(default_factory=dict)
    frequent_label: int | None = None
    sample_stats: dict = field(default_factory=dict)
    rounds: int | None = None

    @property
    def checksum(self) -> str:
        return label_checksum(self.canonical_labels)

    def to_json(self, graph_name: str, spec: AlgorithmSpec | str, n: int, m: int) -> dict:
        return {
            "graph": graph_name,
            "n": int(n),
            "m": int(m),
            "spec_string": str(spec),
            "sample_s": self.timings.get("sample", 0.0),
            "finish_s": self.timings.get("finish", 0.0),
            "total_s": self.timings.get("total", 0.0),
            "num_components": self.num_components,
            "largest_component": self.largest_size,
            "label_checksum": self.checksum,
        }


def label_checksum(canonical: np.ndarray) -> str:
    """Hash of the (vertex, label) pairs that does not depend on their order."""
    c = np.asarray(canonical, dtype=np.uint64)
    v = np.arange(c.shape[0], dtype=np.uint64)
    with np.errstate(over="ignore"):
        x = (v * np.uint64(0x9E3779B97F4A7C15)) ^ (c + np.uint64(0x632BE59BD9B4E019))
        x ^= x >> np.uint64(31)
        x *= np.uint64(0xBF58476D1CE4E5B9)
        x ^= x >> np.uint64(29)
        total = int(x.sum(dtype=np.uint64))
    return f"{total:016x}"


def bfs_oracle(graph: Graph) -> np.ndarray:
    """Sequential BFS from each unvisited vertex in id order."""
    n = graph.n
    adj = graph.adjacency
    label = [-1] * n
    for s in range(n):
        if label[s] >= 0:
            continue
        label[s] = s
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if label[w] < 0:
                    label[w] = s
                    queue.append(w)
    return np.asarray(label, dtype=np.int64)


def _report(canonical: np.ndarray) -> tuple[int, int]:
    n = canonical.shape[0]
    if n == 0:
        return 0, 0
    counts = np.bincount(canonical, minlength=n)
    return int(np.count_nonzero(counts)), int(counts.max())


def finish_edges(graph: Graph, labels: np.ndarray, l_max: int | None) -> tuple[list[int], list[int]]:
    """Edges a union-find finish must apply.

    Sources labeled ``l_max`` are skipped; an edge between a skipped and a
    kept vertex is applied from the kept side.  Otherwise each undirected
    edge is applied once, from its smaller endpoint.
    """
    src, dst = graph.edge_arrays()
    if l_max is None:
        keep = src < dst
    else:
        kept_src = labels[src] != l_max
        keep = kept_src & ((src < dst) | (labels[dst] == l_max))
    return src[keep].tolist(), dst[keep].tolist()


def finish_union_find(
    graph: Graph,
    uf: UnionFindSpec,
    labels: np.ndarray,
    l_max: int | None,
    forest: ForestEdges | None = None,
    workers: int = 1,
    seed: int = 0,
    array_factory: Callable[[list], ParentArray] = ParentArray,
) -> ParentArray:
    P = array_factory(labels.tolist())
    unite = make_unite(uf, P, forest=forest, seed=seed)
    us, vs = finish_edges(graph, labels, l_max)

    def body(lo, hi):
        for i in range(lo, hi):
            unite(us[i], vs[i])

    parallel_for(len(us), body, workers)
    return P


def _run(
    graph: Graph,
    spec: AlgorithmSpec,
    forest: ForestEdges | None,
    workers: int | None,
    frequent=AUTO,
) -> ComponentReport:
    workers = resolve_workers(workers)
    t0 = time.perf_counter()
    sampled = sample(graph, spec.sampling, forest=forest, workers=workers)
    labels = reroot_at_min(sampled.labels, forest)
    t1 = time.perf_counter()
    if frequent == AUTO:
        l_max = identify_frequent(labels, seed=spec.sampling.seed) if spec.sampling.scheme != "none" else None
    else:
        l_max = frequent
    t2 = time.perf_counter()
    kind = spec.finish_kind
    rounds = None
    if kind == "union_find":
        P = finish_union_find(graph, spec.union_find, labels, l_max, forest, workers, seed=spec.sampling.seed)
        final = full_shortcut(P.to_numpy())
    else:
        info = RoundInfo()
        kwargs = {"workers": workers, "info": info}
        if forest is not None:
            kwargs["forest"] = forest
        final = run_min_based(spec.finish, graph, labels, l_max, **kwargs)
        rounds = info.rounds
    t3 = time.perf_counter()
    canonical = canonicalize(final)
    num, largest = _report(canonical)
    t4 = time.perf_counter()
    return ComponentReport(
        num_components=num,
        largest_size=largest,
        canonical_labels=canonical,
        timings={"sample": t1 - t0, "identify": t2 - t1, "finish": t3 - t2, "total": t4 - t0},
        frequent_label=l_max,
        sample_stats=sampled.stats,
        rounds=rounds,
    )


def _as_spec(spec) -> AlgorithmSpec:
    return AlgorithmSpec.parse(spec) if isinstance(spec, str) else spec


def connectivity(graph: Graph, spec: AlgorithmSpec | str, workers: int | None = 1, frequent=AUTO) -> ComponentReport:
    """Connected components under ``spec``.

    ``frequent`` overrides the skipped label: AUTO samples it, None skips
    nothing, and any vertex id forces that label.
    """
    return _run(graph, _as_spec(spec), None, workers, frequent)


def spanning_forest(
    graph: Graph, spec: AlgorithmSpec | str, workers: int | None = 1, frequent=AUTO
) -> tuple[np.ndarray, ComponentReport]:
    """A spanning forest as an (n - c, 2) edge array, plus the component report."""
    spec = _as_spec(spec)
    if not spec.root_based:
        raise SpecError(f"spanning forest needs a root-based finish; {spec.finish} is not root-based")
    forest = ForestEdges(graph.n)
    report = _run(graph, spec, forest, workers, frequent)
    return forest.edges(), report
