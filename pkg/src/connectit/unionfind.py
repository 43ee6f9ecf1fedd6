"""Concurrent union-find: find options, splice options and union kernels.

All kernels keep the order ``P[v] <= v`` (a root is only hooked under a
strictly smaller label) except the randomized JTB kernel, which links by
random priority.  A unite returns True exactly when the call itself
performed the root hook that merged two trees.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .atomics import HOOK_EMPTY, ForestEdges, ParentArray

__all__ = [
    "KERNELS",
    "FIND_OPTIONS",
    "SPLICE_OPTIONS",
    "REM_KERNELS",
    "SpecError",
    "UnionFindSpec",
    "validate_spec",
    "all_union_find_specs",
    "find_naive",
    "find_compress",
    "find_atomic_split",
    "find_atomic_halve",
    "find_two_try_split",
    "split_atomic_one",
    "halve_atomic_one",
    "splice_atomic",
    "splice",
    "make_unite",
    "is_connected",
    "DEFAULT_UF",
]

KERNELS = ("uf_async", "uf_hooks", "uf_early", "uf_rem_lock", "uf_rem_cas", "uf_jtb")
FIND_OPTIONS = ("find_naive", "find_atomic_split", "find_atomic_halve", "find_compress", "find_two_try_split")
SPLICE_OPTIONS = ("split_atomic_one", "halve_atomic_one", "splice_atomic")
REM_KERNELS = ("uf_rem_lock", "uf_rem_cas")


class SpecError(ValueError):
    """An algorithm string that is malformed or rejected."""


@dataclass(frozen=True)
class UnionFindSpec:
    union_kernel: str
    find_option: str
    splice_option: str | None = None

    @property
    def is_rem(self) -> bool:
        return self.union_kernel in REM_KERNELS

    @property
    def wait_free(self) -> bool:
        """Safe for arbitrary mixing of unites and finds (no splice_atomic)."""
        return self.splice_option != "splice_atomic"

    @property
    def min_linking(self) -> bool:
        return self.union_kernel != "uf_jtb"

    def to_string(self) -> str:
        if self.is_rem:
            return f"{self.union_kernel};{self.splice_option};{self.find_option}"
        return f"{self.union_kernel};{self.find_option}"

    __str__ = to_string

    @classmethod
    def parse(cls, text: str) -> "UnionFindSpec":
        """Parse ``kernel;splice;find`` (splice may be omitted for non-Rem kernels)."""
        tokens = [t.strip() for t in text.split(";") if t.strip()]
        kernel = finder = splicer = None
        for tok in tokens:
            if tok in KERNELS:
                slot = "kernel"
            elif tok in FIND_OPTIONS:
                slot = "find"
            elif tok in SPLICE_OPTIONS:
                slot = "splice"
            else:
                raise SpecError(f"unknown union-find token {tok!r} in {text!r}")
            if {"kernel": kernel, "find": finder, "splice": splicer}[slot] is not None:
                raise SpecError(f"duplicate {slot} token in {text!r}")
            if slot == "kernel":
                kernel = tok
            elif slot == "find":
                finder = tok
            else:
                splicer = tok
        if kernel is None:
            raise SpecError(f"missing union kernel in {text!r}")
        if finder is None:
            raise SpecError(f"missing find option in {text!r}")
        if kernel not in REM_KERNELS:
            splicer = None  # only Rem kernels splice
        return validate_spec(cls(kernel, finder, splicer))


def validate_spec(spec: UnionFindSpec) -> UnionFindSpec:
    """Return ``spec`` normalized, or raise SpecError with the reason."""
    if spec.union_kernel not in KERNELS:
        raise SpecError(f"unknown union kernel {spec.union_kernel!r}")
    if spec.find_option not in FIND_OPTIONS:
        raise SpecError(f"unknown find option {spec.find_option!r}")
    if spec.is_rem:
        if spec.splice_option is None:
            raise SpecError(f"{spec.union_kernel} needs a splice option ({', '.join(SPLICE_OPTIONS)})")
        if spec.splice_option not in SPLICE_OPTIONS:
            raise SpecError(f"unknown splice option {spec.splice_option!r}")
        if spec.splice_option == "splice_atomic" and spec.find_option == "find_compress":
            raise SpecError(
                f"{spec.union_kernel} with splice_atomic and find_compress is rejected: "
                "combining full path compression with the atomic splice rule gives an incorrect algorithm"
            )
    elif spec.splice_option is not None:
        spec = UnionFindSpec(spec.union_kernel, spec.find_option, None)
    if spec.find_option == "find_two_try_split" and spec.union_kernel != "uf_jtb":
        raise SpecError("find_two_try_split is only defined for uf_jtb")
    if spec.union_kernel == "uf_jtb" and spec.find_option not in ("find_naive", "find_two_try_split"):
        raise SpecError("uf_jtb only supports find_naive or find_two_try_split")
    return spec


def all_union_find_specs(wait_free_only: bool = False) -> list[UnionFindSpec]:
    """Every valid combination, in a fixed order."""
    out = []
    for kernel in KERNELS:
        splices = SPLICE_OPTIONS if kernel in REM_KERNELS else (None,)
        for sp in splices:
            for fo in FIND_OPTIONS:
                try:
                    spec = validate_spec(UnionFindSpec(kernel, fo, sp))
                except SpecError:
                    continue
                if wait_free_only and not spec.wait_free:
                    continue
                out.append(spec)
    return out


DEFAULT_UF = UnionFindSpec("uf_rem_cas", "find_naive", "split_atomic_one")


# ---------------------------------------------------------------- finds

def find_naive(u: int, P: ParentArray) -> int:
    load = P.load
    v = load(u)
    while v != u:
        u = v
        v = load(u)
    return u


def find_compress(u: int, P: ParentArray) -> int:
    r = find_naive(u, P)
    load, cas = P.load, P.cas
    j = load(u)
    while j > r:
        cas(u, j, r)
        u = j
        j = load(u)
    return r


def find_atomic_split(u: int, P: ParentArray) -> int:
    load, cas = P.load, P.cas
    v = load(u)
    w = load(v)
    while v != w:
        cas(u, v, w)
        u = v
        v = load(u)
        w = load(v)
    return v


def find_atomic_halve(u: int, P: ParentArray) -> int:
    load, cas = P.load, P.cas
    v = load(u)
    w = load(v)
    while v != w:
        cas(u, v, w)
        u = load(u)
        v = load(u)
        w = load(v)
    return v


def find_two_try_split(u: int, P: ParentArray) -> int:
    load, cas = P.load, P.cas
    while True:
        v = load(u)
        w = load(v)
        if v == w:
            return v
        cas(u, v, w)
        v = load(u)
        w = load(v)
        if v == w:
            return v
        cas(u, v, w)
        u = v


_FINDS: dict[str, Callable[[int, ParentArray], int]] = {
    "find_naive": find_naive,
    "find_compress": find_compress,
    "find_atomic_split": find_atomic_split,
    "find_atomic_halve": find_atomic_halve,
    "find_two_try_split": find_two_try_split,
}


def get_find(name: str) -> Callable[[int, ParentArray], int]:
    try:
        return _FINDS[name]
    except KeyError:
        raise SpecError(f"unknown find option {name!r}") from None


# -------------------------------------------------------------- splices

def split_atomic_one(u: int, v: int, P: ParentArray) -> int:
    load = P.load
    pu = load(u)
    w = load(pu)
    if pu != w:
        P.cas(u, pu, w)
    return pu


def halve_atomic_one(u: int, v: int, P: ParentArray) -> int:
    load = P.load
    pu = load(u)
    w = load(pu)
    if pu != w:
        P.cas(u, pu, w)
    return w


def splice_atomic(u: int, v: int, P: ParentArray) -> int:
    load = P.load
    pu = load(u)
    pv = load(v)
    # labels never increase, and a root is never touched here
    if pv < pu and pu != u:
        P.cas(u, pu, pv)
    return pu


_SPLICES = {
    "split_atomic_one": split_atomic_one,
    "halve_atomic_one": halve_atomic_one,
    "splice_atomic": splice_atomic,
}


def splice(kind: str, u: int, v: int, P: ParentArray) -> int:
    return _SPLICES[kind](u, v, P)


# -------------------------------------------------------------- kernels

def make_unite(
    spec: UnionFindSpec,
    P: ParentArray,
    forest: ForestEdges | None = None,
    seed: int = 0,
    hooks: ParentArray | None = None,
) -> Callable[[int, int], bool]:
    """Bind a kernel to a parent array; returns ``unite(u, v) -> merged``."""
    spec = validate_spec(spec)
    find = get_find(spec.find_option)
    load, link = P.load, P.link
    record = forest.record if forest is not None else None
    naive = spec.find_option == "find_naive"
    kernel = spec.union_kernel

    if kernel == "uf_async":
        def unite(u, v):
            while True:
                pu = find(u, P)
                pv = find(v, P)
                if pu == pv:
                    return False
                if pu < pv:
                    pu, pv = pv, pu
                if link(pu, pv):
                    if record:
                        record(pu, u, v)
                    return True
        return unite

    if kernel == "uf_hooks":
        H = hooks if hooks is not None else P.sibling(len(P), HOOK_EMPTY)

        def unite(u, v):
            while True:
                pu = find(u, P)
                pv = find(v, P)
                if pu == pv:
                    return False
                if pu < pv:
                    pu, pv = pv, pu
                if load(pu) == pu and H.cas(pu, HOOK_EMPTY, pv):
                    # the hook slot reserves pu, so this link cannot fail
                    ok = link(pu, pv)
                    assert ok, "hooked root changed under a held hook"
                    if record:
                        record(pu, u, v)
                    return True
        return unite

    if kernel == "uf_early":
        cas = P.cas

        def unite(u, v):
            pu, pv = u, v
            merged = False
            while pu != pv:
                if pu < pv:
                    pu, pv = pv, pu
                if load(pu) == pu and link(pu, pv):
                    merged = True
                    if record:
                        record(pu, u, v)
                    break
                z = load(pu)
                w = load(z)
                if z != w:
                    cas(pu, z, w)
                pu = w
            if not naive:
                find(u, P)
                find(v, P)
            return merged
        return unite

    if kernel in REM_KERNELS:
        do_splice = _SPLICES[spec.splice_option]
        use_lock = kernel == "uf_rem_lock"
        lock, unlock = P.lock, P.unlock

        def unite(u, v):
            ru, rv = u, v
            while True:
                pru = load(ru)
                prv = load(rv)
                if pru == prv:
                    return False
                if pru < prv:
                    ru, rv = rv, ru
                    pru, prv = prv, pru
                if ru == pru:
                    if use_lock:
                        lock(ru)
                        hooked = load(ru) == ru and link(ru, load(rv))
                        unlock(ru)
                    else:
                        hooked = link(ru, prv)
                    if hooked:
                        if record:
                            record(ru, u, v)
                        if not naive:
                            find(u, P)
                            find(v, P)
                        return True
                    # lost a race on the root; re-read and retry
                    continue
                ru = do_splice(ru, rv, P)
        return unite

    if kernel == "uf_jtb":
        rng = random.Random(seed)
        order = list(range(len(P)))
        rng.shuffle(order)
        priority = order  # priority[v] is a random permutation rank

        def unite(u, v):
            while True:
                pu = find(u, P)
                pv = find(v, P)
                if pu == pv:
                    return False
                if priority[pu] > priority[pv]:
                    pu, pv = pv, pu
                # lower-priority root goes under the higher-priority one
                if link(pu, pv):
                    if record:
                        record(pu, u, v)
                    return True
        return unite

    raise SpecError(f"unknown union kernel {kernel!r}")


def is_connected(u: int, v: int, P: ParentArray, find: Callable = find_naive) -> bool:
    """True iff u and v shared a tree at some instant during the call."""
    load = P.load
    while True:
        ru = find(u, P)
        rv = find(v, P)
        if ru == rv:
            return True
        if load(ru) == ru:
            return False
