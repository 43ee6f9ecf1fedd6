import threading

import numpy as np
import pytest

from connectit.atomics import (
    EDGE_SENTINEL,
    HOOK_EMPTY,
    ForestEdges,
    HookArray,
    InstrumentedParentArray,
    ParentArray,
    pack_edge,
    unpack_edge,
)
from connectit.interleave import Interleaver, ScheduledParentArray


def test_parent_array_primitives():
    P = ParentArray(4)
    assert P.slots == [0, 1, 2, 3]
    assert P.cas(3, 3, 1) and P.load(3) == 1
    assert not P.cas(3, 3, 0)
    assert P.link(2, 0) and P.load(2) == 0
    assert not P.link(2, 1)
    assert P.write_min(1, 0) and not P.write_min(1, 5)
    P.store(0, 0)
    assert P.to_numpy().tolist() == [0, 0, 0, 1]


def test_parent_array_from_values():
    assert ParentArray(np.array([1, 1, 0])).slots == [1, 1, 0]
    assert ParentArray.filled(3, 7).slots == [7, 7, 7]


def test_hook_array_claim_once():
    H = HookArray(3)
    assert H.slots == [HOOK_EMPTY] * 3
    assert H.claim(1, 5)
    assert not H.claim(1, 6)
    assert H.load(1) == 5


def test_edge_packing():
    assert unpack_edge(pack_edge(3, 9)) == (3, 9)
    assert unpack_edge(pack_edge(0, 0)) == (0, 0)
    big = (1 << 32) - 2
    assert unpack_edge(pack_edge(big, 1)) == (big, 1)
    assert pack_edge(big, big) != EDGE_SENTINEL


def test_forest_edges_write_once():
    F = ForestEdges(4)
    assert F.record(2, 2, 0)
    assert not F.record(2, 2, 1)
    assert F.double_writes == 1
    assert F.get(2) == (2, 0) and F.get(0) is None
    F.move(2, 3)
    assert F.get(3) == (2, 0) and F.get(2) is None
    F.record(0, 0, 1)
    with pytest.raises(ValueError):
        F.move(0, 3)
    assert F.edges().tolist() == [[0, 1], [2, 0]]
    assert F.count() == 2


def test_forest_edges_empty():
    F = ForestEdges(3)
    assert F.edges().shape == (0, 2)
    assert F.count() == 0


def test_instrumented_records_and_flags():
    P = InstrumentedParentArray(4)
    P.link(3, 1)
    P.cas(3, 1, 0)
    assert [tuple(w) for w in P.writes] == [(3, 3, 1, True), (3, 1, 0, False)]
    assert not P.violations()
    assert len(P.root_hooks()) == 1
    # linking upward breaks min order
    P.link(0, 2)
    assert len(P.violations()) == 1
    assert not P.violations(require_min_order=False)
    # a non-link write to a root is a violation either way
    Q = InstrumentedParentArray(3)
    Q.cas(2, 2, 1)
    assert len(Q.violations(require_min_order=False)) == 1


def test_instrumented_sibling_is_plain():
    P = InstrumentedParentArray(3)
    S = P.sibling(3, 9)
    assert type(S) is ParentArray and S.slots == [9, 9, 9]


def test_concurrent_cas_single_winner():
    P = ParentArray(1)
    wins = []
    barrier = threading.Barrier(8)

    def go(v):
        barrier.wait()
        if P.cas(0, 0, v):
            wins.append(v)

    threads = [threading.Thread(target=go, args=(v,)) for v in range(1, 9)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(wins) == 1 and P.load(0) == wins[0]


def test_lock_unlock():
    P = ParentArray(2)
    P.lock(1)
    P.unlock(1)
    P.lock(1)
    P.unlock(1)


def test_interleaver_reproducible():
    def trace(seed):
        sched = Interleaver(seed=seed, switch_prob=0.5)
        P = ScheduledParentArray(1, scheduler=sched)
        log = []

        def job(tag):
            def run():
                for _ in range(5):
                    v = P.load(0)
                    log.append((tag, v))
                    P.cas(0, v, v + 1)
                return tag
            return run

        assert sched.run([job(t) for t in range(4)]) == [0, 1, 2, 3]
        return log, P.load(0)

    a, b = trace(7), trace(7)
    assert a == b
    assert trace(8)[0] != a[0]
    assert a[1] <= 20


def test_interleaver_emulated_lock_excludes():
    sched = Interleaver(seed=1, switch_prob=0.9)
    P = ScheduledParentArray(1, scheduler=sched)
    inside = []

    def job():
        for _ in range(10):
            P.lock(0)
            inside.append(1)
            assert len(inside) == 1
            P.load(0)
            inside.pop()
            P.unlock(0)

    sched.run([job] * 4)
    assert sched.switches > 0
