"""Shared arrays with atomic load, compare-and-swap and min-write.

CPython gives no hardware CAS, so every read-modify-write runs under a
single lock.  Loads are plain list reads (atomic under the interpreter).
Subclasses hook the primitives to record writes or to inject
interleavings; algorithm code only ever talks to this interface.
"""

from __future__ import annotations

import threading
from typing import Iterable

import numpy as np

__all__ = [
    "ParentArray",
    "HookArray",
    "ForestEdges",
    "InstrumentedParentArray",
    "StructuralWrite",
    "HOOK_EMPTY",
    "EDGE_SENTINEL",
]

# larger than any vertex id; a HookArray slot starts here
HOOK_EMPTY = (1 << 63) - 1
# all-ones bit pattern of the packed (u, v) edge encoding
EDGE_SENTINEL = (1 << 64) - 1
_HALF = 32
_MASK = (1 << _HALF) - 1


class ParentArray:
    """n slots of vertex labels (parent pointers)."""

    def __init__(self, n_or_values: int | Iterable[int]):
        if isinstance(n_or_values, (int, np.integer)):
            self.slots = list(range(int(n_or_values)))
        else:
            self.slots = [int(x) for x in (n_or_values.tolist() if isinstance(n_or_values, np.ndarray) else n_or_values)]
        self._rmw = threading.Lock()
        self._vertex_locks: dict[int, threading.Lock] = {}
        self.load = self.slots.__getitem__

    @classmethod
    def filled(cls, n: int, value: int, **kwargs) -> "ParentArray":
        return cls([value] * n, **kwargs)

    def __len__(self) -> int:
        return len(self.slots)

    def cas(self, i: int, old: int, new: int) -> bool:
        with self._rmw:
            if self.slots[i] != old:
                return False
            self.slots[i] = new
        return True

    def link(self, root: int, target: int) -> bool:
        """Hook ``root`` under ``target``; fails if ``root`` is no longer a root."""
        return self.cas(root, root, target)

    def store(self, i: int, value: int) -> None:
        with self._rmw:
            self.slots[i] = value

    def write_min(self, i: int, value: int) -> bool:
        with self._rmw:
            if value < self.slots[i]:
                self.slots[i] = value
                return True
        return False

    # per-vertex mutexes (lazily created, used by the lock-based Rem kernel)
    def _mutex(self, i: int) -> threading.Lock:
        lock = self._vertex_locks.get(i)
        if lock is None:
            with self._rmw:
                lock = self._vertex_locks.setdefault(i, threading.Lock())
        return lock

    def lock(self, i: int) -> None:
        self._mutex(i).acquire()

    def unlock(self, i: int) -> None:
        self._mutex(i).release()

    def sibling(self, n: int, value: int) -> "ParentArray":
        """A new array of the same kind (shares scheduling hooks, not data)."""
        return type(self).filled(n, value)

    def to_numpy(self) -> np.ndarray:
        return np.asarray(self.slots, dtype=np.int64)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.slots!r})"


class HookArray(ParentArray):
    """Hook slots for the hooks kernel; each moves off HOOK_EMPTY at most once."""

    def __init__(self, n_or_values):
        if isinstance(n_or_values, (int, np.integer)):
            n_or_values = [HOOK_EMPTY] * int(n_or_values)
        super().__init__(n_or_values)

    def claim(self, i: int, value: int) -> bool:
        return self.cas(i, HOOK_EMPTY, value)


def pack_edge(u: int, v: int) -> int:
    return (u << _HALF) | v


def unpack_edge(code: int) -> tuple[int, int]:
    return code >> _HALF, code & _MASK


class ForestEdges:
    """One edge slot per vertex, written at most once from the sentinel."""

    def __init__(self, n: int):
        self.slots = [EDGE_SENTINEL] * n
        self._rmw = threading.Lock()
        self.double_writes = 0

    def __len__(self) -> int:
        return len(self.slots)

    def record(self, slot: int, u: int, v: int) -> bool:
        code = pack_edge(u, v)
        with self._rmw:
            if self.slots[slot] != EDGE_SENTINEL:
                self.double_writes += 1
                return False
            self.slots[slot] = code
        return True

    def get(self, slot: int) -> tuple[int, int] | None:
        code = self.slots[slot]
        return None if code == EDGE_SENTINEL else unpack_edge(code)

    def move(self, src: int, dst: int) -> None:
        """Reassign the edge held by ``src`` to the empty slot ``dst``."""
        with self._rmw:
            if self.slots[dst] != EDGE_SENTINEL:
                raise ValueError(f"forest slot {dst} already holds an edge")
            self.slots[dst], self.slots[src] = self.slots[src], EDGE_SENTINEL

    def edges(self) -> np.ndarray:
        """Filter out sentinels; returns an (k, 2) array."""
        codes = [c for c in self.slots if c != EDGE_SENTINEL]
        out = np.empty((len(codes), 2), dtype=np.int64)
        for row, code in enumerate(codes):
            out[row] = unpack_edge(code)
        return out

    def count(self) -> int:
        return sum(1 for c in self.slots if c != EDGE_SENTINEL)


class StructuralWrite(tuple):
    """(slot, old, new, via_link) record of one successful parent write."""

    __slots__ = ()

    def __new__(cls, slot, old, new, via_link):
        return tuple.__new__(cls, (slot, old, new, via_link))

    slot = property(lambda self: self[0])
    old = property(lambda self: self[1])
    new = property(lambda self: self[2])
    via_link = property(lambda self: self[3])


class InstrumentedParentArray(ParentArray):
    """Records every successful structural write for hook-discipline checks."""

    def __init__(self, n_or_values):
        super().__init__(n_or_values)
        self.writes: list[StructuralWrite] = []

    def cas(self, i, old, new, _via_link=False):
        with self._rmw:
            if self.slots[i] != old:
                return False
            self.slots[i] = new
            if old != new:
                self.writes.append(StructuralWrite(i, old, new, _via_link))
        return True

    def link(self, root, target):
        return self.cas(root, root, target, _via_link=True)

    def store(self, i, value):
        with self._rmw:
            old = self.slots[i]
            self.slots[i] = value
            if old != value:
                self.writes.append(StructuralWrite(i, old, value, False))

    def write_min(self, i, value):
        with self._rmw:
            old = self.slots[i]
            if value < old:
                self.slots[i] = value
                self.writes.append(StructuralWrite(i, old, value, False))
                return True
        return False

    def sibling(self, n, value):
        # hook arrays are not structural; keep them uninstrumented
        return ParentArray.filled(n, value)

    def violations(self, require_min_order: bool = True) -> list[StructuralWrite]:
        """Writes breaking root-hook discipline.

        A link must start at a root (old == slot) and, for min-linking
        kernels, move to a smaller label.  Any other write must rewrite a
        non-root slot (old != slot) and never increase the label.
        """
        bad = []
        for w in self.writes:
            if w.via_link:
                if w.old != w.slot or (require_min_order and not w.new < w.slot):
                    bad.append(w)
            elif w.old == w.slot or (require_min_order and not w.new < w.old):
                bad.append(w)
        return bad

    def root_hooks(self) -> list[StructuralWrite]:
        return [w for w in self.writes if w.via_link]
