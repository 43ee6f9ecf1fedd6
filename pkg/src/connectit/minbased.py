"""Round-synchronous min-based finish methods.

Liu-Tarjan variants, Stergiou's two-array method, Shiloach-Vishkin and
label propagation.  A round reads a snapshot of the parents taken at its
start and applies all proposals with a min-write, which equals any
interleaving of concurrent writeMin calls because min is commutative.

Sampled input labels must be height-one and rooted at minima.  When a
frequent label ``l_max`` is given:

* root-based methods (SV and the RootUp Liu-Tarjan variants) skip every
  edge whose endpoints both carry ``l_max`` and process the rest from both
  sides, so the big component is still reached from outside;
* the other methods run in a shifted id space where slot 0 is a reserved
  label below every vertex, held by the ``l_max`` component, so those
  vertices can never adopt a new label.  Labels are mapped back at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .atomics import ForestEdges
from .graph import EdgeList, Graph
from .parallel import parallel_for, resolve_workers

__all__ = [
    "LiuTarjanSpec",
    "LT_VARIANTS",
    "liu_tarjan_cc",
    "stergiou_cc",
    "shiloach_vishkin_cc",
    "label_propagation_cc",
    "MIN_BASED_FINISHES",
    "RoundInfo",
]

_CONNECT_CODES = {"C": "connect", "P": "parent_connect", "E": "extended_connect"}


@dataclass(frozen=True)
class LiuTarjanSpec:
    connect: str
    root_up: bool
    shortcut: str
    alter: bool

    def __post_init__(self):
        if self.connect not in _CONNECT_CODES.values():
            raise ValueError(f"unknown connect rule {self.connect!r}")
        if self.shortcut not in ("shortcut", "full_shortcut"):
            raise ValueError(f"unknown shortcut rule {self.shortcut!r}")
        if self.connect == "connect" and not self.alter:
            raise ValueError("Connect requires Alter for correctness")
        if self.root_up and self.connect == "extended_connect":
            raise ValueError("RootUp is only paired with Connect or ParentConnect")

    @property
    def name(self) -> str:
        code = {v: k for k, v in _CONNECT_CODES.items()}[self.connect]
        code += "R" if self.root_up else "U"
        code += "F" if self.shortcut == "full_shortcut" else "S"
        return code + ("A" if self.alter else "")

    @property
    def root_based(self) -> bool:
        return self.root_up

    @classmethod
    def from_name(cls, name: str) -> "LiuTarjanSpec":
        key = name.upper()
        if key not in LT_VARIANTS:
            raise ValueError(f"unknown Liu-Tarjan variant {name!r}; choose from {', '.join(LT_VARIANTS)}")
        return LT_VARIANTS[key]


def _build_variants() -> dict[str, LiuTarjanSpec]:
    names = ["CUSA", "CRSA", "PUSA", "PRSA", "PUS", "PRS", "EUSA", "EUS",
             "CUFA", "CRFA", "PUFA", "PRFA", "PUF", "PRF", "EUFA", "EUF"]
    out = {}
    for nm in names:
        out[nm] = LiuTarjanSpec(
            connect=_CONNECT_CODES[nm[0]],
            root_up=nm[1] == "R",
            shortcut="full_shortcut" if nm[2] == "F" else "shortcut",
            alter=nm.endswith("A"),
        )
    return out


LT_VARIANTS = _build_variants()
MIN_BASED_FINISHES = ("stergiou", "sv", "label_prop")


@dataclass
class RoundInfo:
    rounds: int = 0
    skipped_edges: int = 0


Observer = Callable[[int, np.ndarray], None]


# ----------------------------------------------------------------- input

def _edge_arrays(source) -> tuple[int | None, np.ndarray, np.ndarray]:
    if isinstance(source, Graph):
        src, dst = source.undirected_edges()
        return source.n, src, dst
    if isinstance(source, EdgeList):
        return source.n, source.src, source.dst
    src, dst = source
    return None, np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64)


def _work_edges(source, labels: np.ndarray, l_max: int | None):
    """One copy of each undirected edge that is not internal to ``l_max``."""
    _, src, dst = _edge_arrays(source)
    lo, hi = np.minimum(src, dst), np.maximum(src, dst)
    keep = lo != hi
    lo, hi = lo[keep], hi[keep]
    if not isinstance(source, Graph) and lo.shape[0]:
        n = labels.shape[0]
        _, first = np.unique(lo * n + hi, return_index=True)
        first.sort()
        lo, hi = lo[first], hi[first]
    skipped = 0
    if l_max is not None and lo.shape[0]:
        internal = (labels[lo] == l_max) & (labels[hi] == l_max)
        skipped = int(internal.sum())
        lo, hi = lo[~internal], hi[~internal]
    return lo, hi, skipped


def _init_labels(labels, n: int) -> np.ndarray:
    if labels is None:
        return np.arange(n, dtype=np.int64)
    if hasattr(labels, "to_numpy"):
        labels = labels.to_numpy()
    out = np.array(labels, dtype=np.int64)
    if out.shape != (n,):
        raise ValueError(f"labels must have shape ({n},)")
    return out


def _infer_n(source, labels) -> int:
    n, _, _ = _edge_arrays(source)
    if n is None:
        if labels is None:
            raise ValueError("pass labels (or a Graph/EdgeList) so the vertex count is known")
        n = len(labels)
    return n


# --------------------------------------------------------- primitives

def _min_apply(P: np.ndarray, targets: np.ndarray, cands: np.ndarray, workers: int) -> None:
    """writeMin every (target, candidate) pair into P."""
    if targets.shape[0] == 0:
        return
    if workers <= 1 or targets.shape[0] < 4096:
        np.minimum.at(P, targets, cands)
        return

    def part(lo, hi):
        local = P.copy()
        np.minimum.at(local, targets[lo:hi], cands[lo:hi])
        return local

    pieces = parallel_for(targets.shape[0], part, workers)
    np.minimum(P, np.minimum.reduce(pieces), out=P)


def _shortcut_once(P: np.ndarray) -> np.ndarray:
    return P[P]


def _shortcut_full(P: np.ndarray) -> np.ndarray:
    while True:
        Q = P[P]
        if np.array_equal(Q, P):
            return Q
        P = Q


def _record_hooks(forest, before, after, targets, cands, eu, ev, offset=0):
    """Give each newly hooked root the edge that supplied its winning candidate."""
    if forest is None or targets.shape[0] == 0:
        return
    win = (after[targets] == cands) & (before[targets] != after[targets])
    idx = np.flatnonzero(win)
    if idx.shape[0] == 0:
        return
    t = targets[idx]
    _, first = np.unique(t, return_index=True)
    for k in first.tolist():
        e = idx[k]
        forest.record(int(t[k]) - offset, int(eu[e]) - offset, int(ev[e]) - offset)


def _check_monotone(before: np.ndarray, after: np.ndarray) -> None:
    if np.any(after > before):
        raise AssertionError("a label increased during a min-based round")


# ------------------------------------------------------ shifted space

class _Shift:
    """Reserved-minimum relabeling for non-root-based methods."""

    def __init__(self, labels: np.ndarray, l_max: int | None):
        self.l_max = l_max
        self.active = l_max is not None

    def enter(self, labels, lo, hi):
        if not self.active:
            return labels, lo, hi
        shifted = np.empty(labels.shape[0] + 1, dtype=np.int64)
        shifted[0] = 0
        shifted[1:] = labels + 1
        shifted[1:][labels == self.l_max] = 0
        return shifted, lo + 1, hi + 1

    def leave(self, labels):
        if not self.active:
            return labels
        out = labels[1:] - 1
        out[out < 0] = self.l_max
        return out


# ------------------------------------------------------ Liu-Tarjan

def liu_tarjan_cc(
    source,
    spec: LiuTarjanSpec | str,
    labels=None,
    l_max: int | None = None,
    *,
    forest: ForestEdges | None = None,
    workers: int | None = 1,
    info: RoundInfo | None = None,
    observer: Observer | None = None,
    max_rounds: int | None = None,
) -> np.ndarray:
    """Run a Liu-Tarjan variant to its fixed point; returns the label array."""
    if isinstance(spec, str):
        spec = LiuTarjanSpec.from_name(spec)
    if forest is not None and not spec.root_based:
        raise ValueError(f"spanning forest needs a root-based variant, {spec.name} is not")
    workers = resolve_workers(workers)
    n = _infer_n(source, labels)
    P = _init_labels(labels, n)
    a, b, skipped = _work_edges(source, P, l_max)
    info = info if info is not None else RoundInfo()
    info.skipped_edges = skipped

    shift = _Shift(P, None if spec.root_based else l_max)
    P, a, b = shift.enter(P, a, b)
    offset = 1 if shift.active else 0
    eu, ev = a.copy(), b.copy()  # original endpoints, kept aligned through Alter
    if spec.alter and a.shape[0]:
        # a sampled start is not identity: edges must speak in current labels
        a, b = P[a], P[b]
        live = a != b
        a, b, eu, ev = a[live], b[live], eu[live], ev[live]
    limit = max_rounds if max_rounds is not None else 4 * (P.shape[0] + 2)

    rounds = 0
    while True:
        rounds += 1
        if rounds > limit:
            raise RuntimeError(f"{spec.name} did not converge within {limit} rounds")
        P0 = P.copy()
        pa, pb = P0[a], P0[b]
        if spec.connect == "connect":
            targets = np.concatenate([a, b])
            cands = np.concatenate([b, a])
        elif spec.connect == "parent_connect":
            targets = np.concatenate([pa, pb])
            cands = np.concatenate([pb, pa])
        else:
            targets = np.concatenate([a, b, pa, pb])
            cands = np.concatenate([pb, pa, pb, pa])
        keep = cands < P0[targets]
        if spec.root_up:
            keep &= P0[targets] == targets
        targets, cands = targets[keep], cands[keep]
        _min_apply(P, targets, cands, workers)
        if forest is not None:
            reps = 2 if spec.connect != "extended_connect" else 4
            eidx = np.tile(np.arange(a.shape[0]), reps)[keep]
            _record_hooks(forest, P0, P, targets, cands, eu[eidx], ev[eidx], offset)
        P = _shortcut_full(P) if spec.shortcut == "full_shortcut" else _shortcut_once(P)
        _check_monotone(P0, P)
        if observer is not None:
            observer(rounds, shift.leave(P.copy()) if shift.active else P)
        changed = not np.array_equal(P, P0)
        if spec.alter and a.shape[0]:
            a, b = P[a], P[b]
            live = a != b
            a, b, eu, ev = a[live], b[live], eu[live], ev[live]
        if not changed:
            break
    info.rounds = rounds
    return shift.leave(_shortcut_full(P))


def stergiou_cc(
    source,
    labels=None,
    l_max: int | None = None,
    *,
    workers: int | None = 1,
    info: RoundInfo | None = None,
    observer: Observer | None = None,
) -> np.ndarray:
    """Two-array parent-connect with a single shortcut per round."""
    workers = resolve_workers(workers)
    n = _infer_n(source, labels)
    cur = _init_labels(labels, n)
    a, b, skipped = _work_edges(source, cur, l_max)
    info = info if info is not None else RoundInfo()
    info.skipped_edges = skipped
    shift = _Shift(cur, l_max)
    cur, a, b = shift.enter(cur, a, b)
    rounds = 0
    while True:
        rounds += 1
        prev = cur.copy()
        pa, pb = prev[a], prev[b]
        targets = np.concatenate([pa, pb])
        cands = np.concatenate([pb, pa])
        keep = cands < prev[targets]
        _min_apply(cur, targets[keep], cands[keep], workers)
        cur = cur[cur]
        _check_monotone(prev, cur)
        if observer is not None:
            observer(rounds, shift.leave(cur.copy()) if shift.active else cur)
        if np.array_equal(cur, prev):
            break
    info.rounds = rounds
    return shift.leave(_shortcut_full(cur))


def shiloach_vishkin_cc(
    source,
    labels=None,
    l_max: int | None = None,
    *,
    forest: ForestEdges | None = None,
    workers: int | None = 1,
    info: RoundInfo | None = None,
    observer: Observer | None = None,
) -> np.ndarray:
    """Hook larger roots under smaller neighbouring roots, then fully compress."""
    workers = resolve_workers(workers)
    n = _infer_n(source, labels)
    P = _shortcut_full(_init_labels(labels, n))
    a, b, skipped = _work_edges(source, P, l_max)
    info = info if info is not None else RoundInfo()
    info.skipped_edges = skipped
    rounds = 0
    while True:
        rounds += 1
        prev = P.copy()
        la, lb = prev[a], prev[b]
        lo, hi = np.minimum(la, lb), np.maximum(la, lb)
        # every label is a root at round start because the array is flat
        hook = lo != hi
        targets, cands = hi[hook], lo[hook]
        _min_apply(P, targets, cands, workers)
        if forest is not None:
            _record_hooks(forest, prev, P, targets, cands, a[hook], b[hook])
        changed = bool(hook.any())
        P = _shortcut_full(P)
        _check_monotone(prev, P)
        if observer is not None:
            observer(rounds, P)
        if not changed:
            break
    info.rounds = rounds
    return P


def label_propagation_cc(
    source,
    labels=None,
    l_max: int | None = None,
    *,
    workers: int | None = 1,
    info: RoundInfo | None = None,
    observer: Observer | None = None,
) -> np.ndarray:
    """Frontier-based min-label spreading until no label changes."""
    workers = resolve_workers(workers)
    n = _infer_n(source, labels)
    L = _init_labels(labels, n)
    a, b, skipped = _work_edges(source, L, l_max)
    info = info if info is not None else RoundInfo()
    info.skipped_edges = skipped
    shift = _Shift(L, l_max)
    L, a, b = shift.enter(L, a, b)
    frontier = np.ones(L.shape[0], dtype=bool)
    rounds = 0
    while True:
        rounds += 1
        prev = L.copy()
        act = frontier[a] | frontier[b]
        ea, eb = a[act], b[act]
        targets = np.concatenate([ea, eb])
        cands = np.concatenate([prev[eb], prev[ea]])
        keep = cands < prev[targets]
        _min_apply(L, targets[keep], cands[keep], workers)
        _check_monotone(prev, L)
        frontier = L != prev
        if observer is not None:
            observer(rounds, shift.leave(L.copy()) if shift.active else L)
        if not frontier.any():
            break
    info.rounds = rounds
    return shift.leave(L)


def run_min_based(name: str, source, labels=None, l_max=None, **kwargs) -> np.ndarray:
    """Dispatch by finish name: ``lt_<variant>``, ``stergiou``, ``sv`` or ``label_prop``."""
    if name.startswith("lt_"):
        return liu_tarjan_cc(source, LiuTarjanSpec.from_name(name[3:]), labels, l_max, **kwargs)
    if name == "stergiou":
        return stergiou_cc(source, labels, l_max, **kwargs)
    if name == "sv":
        return shiloach_vishkin_cc(source, labels, l_max, **kwargs)
    if name == "label_prop":
        return label_propagation_cc(source, labels, l_max, **kwargs)
    raise ValueError(f"unknown min-based finish {name!r}")
