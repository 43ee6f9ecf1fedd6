"""Vectorized helpers on label (parent) arrays."""

from __future__ import annotations

import numpy as np

from .atomics import ForestEdges

__all__ = ["full_shortcut", "canonicalize", "reroot_at_min", "is_height_one", "same_partition"]


def as_labels(labels) -> np.ndarray:
    if hasattr(labels, "to_numpy"):
        return labels.to_numpy()
    return np.asarray(labels, dtype=np.int64)


def full_shortcut(P: np.ndarray) -> np.ndarray:
    """Pointer-jump until every vertex points at its root."""
    orig = P = np.asarray(P, dtype=np.int64)
    for _ in range(max(1, int(P.shape[0]).bit_length() + 2)):
        Q = P[P]
        if np.array_equal(Q, P):
            # doubling folds an even cycle onto itself; real roots are self-loops
            if np.array_equal(orig[Q], Q):
                return Q
            break
        P = Q
    # deeper than doubling allows only if there is a cycle
    raise ValueError("label array does not describe a forest")


def canonicalize(labels) -> np.ndarray:
    """Map every vertex to the minimum vertex id of its tree."""
    roots = full_shortcut(as_labels(labels))
    n = roots.shape[0]
    mins = np.full(n, n, dtype=np.int64)
    np.minimum.at(mins, roots, np.arange(n, dtype=np.int64))
    return mins[roots]


def is_height_one(labels) -> bool:
    P = as_labels(labels)
    return bool(np.array_equal(P[P], P))


def reroot_at_min(labels, forest: ForestEdges | None = None) -> np.ndarray:
    """Turn a height-one labeling into the same partition rooted at minima.

    Finish methods rely on ``P[v] <= v``.  In forest mode the edge held by
    the new root moves to the old root's slot, so each non-root still owns
    exactly one edge.
    """
    P = as_labels(labels)
    n = P.shape[0]
    if n == 0:
        return P.copy()
    mins = np.full(n, n, dtype=np.int64)
    np.minimum.at(mins, P, np.arange(n, dtype=np.int64))
    out = mins[P]
    if forest is not None:
        roots = np.flatnonzero(P == np.arange(n))
        for r, m in zip(roots.tolist(), mins[roots].tolist()):
            if m != r:
                forest.move(m, r)
    return out


def same_partition(a, b) -> bool:
    return bool(np.array_equal(canonicalize(a), canonicalize(b)))
