"""Approximate minimum spanning forest by (1 + eps) weight bucketing.

Buckets are processed from light to heavy.  Within a bucket every edge
whose endpoints are still apart is offered to a concurrent union-find
(uf_rem_cas with split_atomic_one and find_naive); an edge joins the
forest exactly when its unite performed the merging root hook.  Any edge
in bucket i weighs at most (1 + eps) times any edge in bucket i - 1, so
the forest is within a (1 + eps) factor of optimal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .atomics import ParentArray
from .graph import EdgeList
from .labels import full_shortcut
from .parallel import parallel_for, resolve_workers
from .sampling import identify_frequent
from .unionfind import DEFAULT_UF, make_unite

__all__ = ["AMSF_VARIANTS", "AMSFResult", "amsf", "bucket_indices", "kruskal_oracle"]

AMSF_VARIANTS = ("coo", "nf", "nf_s")


@dataclass
class AMSFResult:
    variant: str
    epsilon: float
    edge_ids: np.ndarray
    forest: np.ndarray
    weight: float
    bucket_profile: dict

    def to_json(self, w_opt: float | None = None) -> dict:
        out = {
            "variant": self.variant,
            "epsilon": self.epsilon,
            "forest_edges": int(self.edge_ids.shape[0]),
            "W_apx": self.weight,
        }
        if w_opt is not None:
            out["W_opt"] = w_opt
            out["ratio"] = self.weight / w_opt if w_opt > 0 else 1.0
        return out


def bucket_indices(weights: np.ndarray, epsilon: float, w_min: float | None = None) -> np.ndarray:
    """floor(log_{1+eps}(w / w_min)), exact at the half-open interval boundaries."""
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape[0] == 0:
        return np.empty(0, dtype=np.int64)
    w_min = float(weights.min()) if w_min is None else w_min
    base = 1.0 + epsilon
    idx = np.floor(np.log(weights / w_min) / math.log(base)).astype(np.int64)
    idx = np.maximum(idx, 0)
    # the float log can land one bucket off near a boundary; repair it
    for _ in range(2):
        lower = w_min * np.power(base, idx)
        idx = np.where(lower > weights, idx - 1, idx)
        upper = w_min * np.power(base, idx + 1)
        idx = np.where(upper <= weights, idx + 1, idx)
    return idx


def _validate(edges: EdgeList, epsilon: float) -> np.ndarray:
    if edges.weights is None:
        raise ValueError("AMSF needs a weighted edge list")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    w = edges.weights
    if w.shape[0] and not np.all(w > 0):
        raise ValueError("edge weights must be strictly positive")
    return w


def amsf(
    edges: EdgeList,
    n: int | None = None,
    epsilon: float = 0.25,
    variant: str = "coo",
    seed: int = 0,
    workers: int | None = 1,
) -> AMSFResult:
    if variant not in AMSF_VARIANTS:
        raise ValueError(f"unknown AMSF variant {variant!r}; choose from {', '.join(AMSF_VARIANTS)}")
    w = _validate(edges, epsilon)
    n = edges.n if n is None else n
    workers = resolve_workers(workers)
    m = len(edges)
    # both directions, so a skipped source never hides an edge
    src = np.concatenate([edges.src, edges.dst])
    dst = np.concatenate([edges.dst, edges.src])
    eid = np.concatenate([np.arange(m), np.arange(m)])
    bucket = np.concatenate([bucket_indices(w, epsilon)] * 2) if m else np.empty(0, dtype=np.int64)

    P = ParentArray(n)
    unite = make_unite(DEFAULT_UF, P, seed=seed)
    chosen: list[int] = []
    profile: dict[int, int] = {}

    if variant == "coo":
        order = np.argsort(bucket, kind="stable")
        src, dst, eid, bucket = src[order], dst[order], eid[order], bucket[order]
        cuts = np.flatnonzero(np.diff(bucket)) + 1
        spans = list(zip(np.concatenate(([0], cuts)).tolist(), np.concatenate((cuts, [len(bucket)])).tolist()))
        spans = [(int(bucket[lo]), lo, hi) for lo, hi in spans if hi > lo]
    else:
        spans = [(int(b), None, None) for b in np.unique(bucket)]

    for b, lo, hi in spans:
        roots = full_shortcut(P.to_numpy())
        if lo is not None:
            bs, bd, be = src[lo:hi], dst[lo:hi], eid[lo:hi]
        else:
            # rescan the whole edge list for this bucket
            sel = bucket == b
            bs, bd, be = src[sel], dst[sel], eid[sel]
        live = roots[bs] != roots[bd]
        if variant == "nf_s":
            l_max = identify_frequent(roots, seed=seed + b)
            live &= roots[bs] != l_max
        else:
            # one direction suffices when nothing is skipped
            live &= bs < bd
        us, vs, es = bs[live].tolist(), bd[live].tolist(), be[live].tolist()
        merged: list[list[int]] = []

        def body(lo_, hi_):
            mine = [es[i] for i in range(lo_, hi_) if unite(us[i], vs[i])]
            merged.append(mine)
            return mine

        parallel_for(len(us), body, workers)
        got = [e for part in merged for e in part]
        if got:
            profile[b] = len(got)
        chosen.extend(got)

    ids = np.asarray(sorted(chosen), dtype=np.int64)
    forest = np.stack([edges.src[ids], edges.dst[ids]], axis=1) if ids.shape[0] else np.empty((0, 2), dtype=np.int64)
    return AMSFResult(variant, epsilon, ids, forest, math.fsum(w[ids].tolist()), profile)


def kruskal_oracle(edges: EdgeList, n: int | None = None) -> float:
    """Exact minimum spanning forest weight (sort, then sequential union-find)."""
    n = edges.n if n is None else n
    if edges.weights is None:
        raise ValueError("kruskal_oracle needs a weighted edge list")
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    order = np.argsort(edges.weights, kind="stable")
    for u, v, wt in zip(edges.src[order].tolist(), edges.dst[order].tolist(), edges.weights[order].tolist()):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            chosen.append(wt)
    # correctly rounded, so equal edge sets give equal totals
    return math.fsum(chosen)
