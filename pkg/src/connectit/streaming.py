"""Batch-incremental connectivity over insert-only edge streams.

Three engine classes, chosen by the finish method:

* ``wait_free``: union-find without splice_atomic; inserts and queries
  of a batch run concurrently in one shuffled operation stream.
* ``round_synchronous``: SV and the RootUp Liu-Tarjan variants; a batch
  reruns the rounds over its own edges starting from the current flat
  labels, then the batch's queries are answered.
* ``phase_concurrent``: Rem kernels with splice_atomic; all inserts, a
  barrier, then all queries.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .atomics import ParentArray
from .driver import AlgorithmSpec, connectivity
from .graph import EdgeList, Graph
from .labels import canonicalize, full_shortcut
from .minbased import liu_tarjan_cc, shiloach_vishkin_cc
from .parallel import parallel_for, resolve_workers
from .unionfind import SpecError, get_find, is_connected, make_unite

__all__ = ["Batch", "StreamEngine", "stream_class", "initialize", "process_batch", "final_labels"]

WAIT_FREE = "wait_free"
ROUND_SYNCHRONOUS = "round_synchronous"
PHASE_CONCURRENT = "phase_concurrent"


@dataclass
class Batch:
    inserts: EdgeList | Sequence[tuple[int, int]] = field(default_factory=list)
    queries: Sequence[tuple[int, int]] = field(default_factory=list)

    def insert_pairs(self) -> list[tuple[int, int]]:
        if isinstance(self.inserts, EdgeList):
            return self.inserts.pairs()
        return [(int(u), int(v)) for u, v in self.inserts]

    def query_pairs(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in self.queries]


def stream_class(spec: AlgorithmSpec) -> str:
    uf = spec.union_find
    if uf is not None:
        return WAIT_FREE if uf.wait_free else PHASE_CONCURRENT
    if spec.finish == "sv" or (spec.liu_tarjan is not None and spec.liu_tarjan.root_based):
        return ROUND_SYNCHRONOUS
    raise SpecError(
        f"{spec.finish} cannot stream: only union-find, sv and RootUp Liu-Tarjan finishes apply insertions incrementally"
    )


class StreamEngine:
    def __init__(
        self,
        n: int,
        spec: AlgorithmSpec | str,
        graph: Graph | None = None,
        workers: int | None = 1,
        seed: int = 0,
        array_factory: Callable[[list], ParentArray] = ParentArray,
    ):
        self.spec = AlgorithmSpec.parse(spec) if isinstance(spec, str) else spec
        self.kind = stream_class(self.spec)
        self.n = n
        self.workers = resolve_workers(workers)
        self.seed = seed
        self.batches = 0
        if graph is not None:
            if graph.n != n:
                raise ValueError("initial graph vertex count must equal n")
            start = connectivity(graph, self.spec, workers=self.workers).canonical_labels
        else:
            start = np.arange(n, dtype=np.int64)
        if self.kind == ROUND_SYNCHRONOUS:
            self.labels = start.copy()
            self.P = None
        else:
            self.P = array_factory(start.tolist())
            uf = self.spec.union_find
            self._unite = make_unite(uf, self.P, seed=seed)
            self._find = get_find(uf.find_option)

    # single operations (wait-free class only)
    def insert(self, u: int, v: int) -> bool:
        self._require(WAIT_FREE)
        return self._unite(u, v)

    def query(self, u: int, v: int) -> bool:
        if self.kind == ROUND_SYNCHRONOUS:
            return bool(self.labels[u] == self.labels[v])
        return is_connected(u, v, self.P, self._find)

    def _require(self, kind: str) -> None:
        if self.kind != kind:
            raise SpecError(f"operation needs a {kind} engine, this one is {self.kind}")

    def _check(self, pairs) -> None:
        for u, v in pairs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"vertex pair ({u}, {v}) out of range for n={self.n}")

    def process_batch(self, batch: Batch) -> list[bool]:
        inserts = batch.insert_pairs()
        queries = batch.query_pairs()
        self._check(inserts)
        self._check(queries)
        self.batches += 1
        if self.kind == WAIT_FREE:
            return self._mixed(inserts, queries)
        if self.kind == PHASE_CONCURRENT:
            return self._phased(inserts, queries)
        return self._rounds(inserts, queries)

    def _mixed(self, inserts, queries) -> list[bool]:
        ops = [(0, i) for i in range(len(inserts))] + [(1, i) for i in range(len(queries))]
        random.Random(self.seed * 1_000_003 + self.batches).shuffle(ops)
        answers = [False] * len(queries)
        unite, P, find = self._unite, self.P, self._find

        def body(lo, hi):
            for kind, i in ops[lo:hi]:
                if kind == 0:
                    unite(*inserts[i])
                else:
                    u, v = queries[i]
                    answers[i] = is_connected(u, v, P, find)

        parallel_for(len(ops), body, self.workers)
        return answers

    def _phased(self, inserts, queries) -> list[bool]:
        unite, P, find = self._unite, self.P, self._find

        def insert_body(lo, hi):
            for u, v in inserts[lo:hi]:
                unite(u, v)

        parallel_for(len(inserts), insert_body, self.workers)  # returns only when all inserts finish
        answers = [False] * len(queries)

        def query_body(lo, hi):
            for i in range(lo, hi):
                u, v = queries[i]
                answers[i] = is_connected(u, v, P, find)

        parallel_for(len(queries), query_body, self.workers)
        return answers

    def _rounds(self, inserts, queries) -> list[bool]:
        if inserts:
            arr = np.asarray(inserts, dtype=np.int64)
            edges = (arr[:, 0], arr[:, 1])
            if self.spec.finish == "sv":
                out = shiloach_vishkin_cc(edges, self.labels, workers=self.workers)
            else:
                out = liu_tarjan_cc(edges, self.spec.liu_tarjan, self.labels, workers=self.workers)
            self.labels = full_shortcut(out)
        lab = self.labels
        return [bool(lab[u] == lab[v]) for u, v in queries]

    def final_labels(self) -> np.ndarray:
        if self.kind == ROUND_SYNCHRONOUS:
            return canonicalize(self.labels)
        return canonicalize(self.P.to_numpy())


def initialize(spec, n: int, graph: Graph | None = None, **kwargs) -> StreamEngine:
    return StreamEngine(n, spec, graph=graph, **kwargs)


def process_batch(engine: StreamEngine, batch: Batch) -> list[bool]:
    return engine.process_batch(batch)


def final_labels(engine: StreamEngine) -> np.ndarray:
    return engine.final_labels()
