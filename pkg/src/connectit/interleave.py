"""Randomized interleaving of simulated workers.

Each worker is a greenlet.  Before every shared-memory primitive the
running worker may be preempted and a random runnable worker resumed, so
one seeded run explores an arbitrary (but reproducible) interleaving at
the granularity of single atomic steps.  This exposes races that real
threads under the GIL almost never hit.
"""

from __future__ import annotations

import random
from typing import Callable, Sequence

from greenlet import getcurrent, greenlet

from .atomics import InstrumentedParentArray, ParentArray

__all__ = ["Interleaver", "ScheduledParentArray", "ScheduledInstrumentedArray"]


class Interleaver:
    def __init__(self, seed: int = 0, switch_prob: float = 0.5):
        self.rng = random.Random(seed)
        self.switch_prob = switch_prob
        self._hub = None
        self.switches = 0

    def maybe_switch(self) -> None:
        hub = self._hub
        if hub is None or getcurrent() is hub:
            return
        if self.rng.random() < self.switch_prob:
            self.switches += 1
            hub.switch()

    def force_switch(self) -> None:
        hub = self._hub
        if hub is not None and getcurrent() is not hub:
            self.switches += 1
            hub.switch()

    def run(self, jobs: Sequence[Callable[[], object]]) -> list:
        """Run all jobs to completion under a random schedule; returns their results."""
        results: list = [None] * len(jobs)

        def wrap(idx, job):
            def body():
                results[idx] = job()
            return body

        self._hub = getcurrent()
        workers = [greenlet(wrap(i, job)) for i, job in enumerate(jobs)]
        try:
            live = list(workers)
            while live:
                g = live[self.rng.randrange(len(live))]
                g.switch()
                if g.dead:
                    live.remove(g)
        finally:
            self._hub = None
        return results


class _ScheduledMixin:
    """Yields to the scheduler before each shared access."""

    scheduler: Interleaver

    def _bind(self, scheduler: Interleaver) -> None:
        self.scheduler = scheduler
        raw = self.slots.__getitem__
        maybe = scheduler.maybe_switch

        def load(i):
            maybe()
            return raw(i)

        self.load = load
        self._held: set[int] = set()

    def cas(self, i, old, new, **kw):
        self.scheduler.maybe_switch()
        return super().cas(i, old, new, **kw)

    def link(self, root, target):
        self.scheduler.maybe_switch()
        return super().link(root, target)

    def write_min(self, i, value):
        self.scheduler.maybe_switch()
        return super().write_min(i, value)

    # greenlets share one OS thread, so mutexes are emulated by spinning
    def lock(self, i):
        self.scheduler.maybe_switch()
        while i in self._held:
            self.scheduler.force_switch()
        self._held.add(i)

    def unlock(self, i):
        self._held.discard(i)

    def sibling(self, n, value):
        return ScheduledParentArray([value] * n, scheduler=self.scheduler)


class ScheduledParentArray(_ScheduledMixin, ParentArray):
    def __init__(self, n_or_values, scheduler: Interleaver):
        ParentArray.__init__(self, n_or_values)
        self._bind(scheduler)

    @classmethod
    def filled(cls, n, value, scheduler=None):
        return cls([value] * n, scheduler=scheduler)


class ScheduledInstrumentedArray(_ScheduledMixin, InstrumentedParentArray):
    def __init__(self, n_or_values, scheduler: Interleaver):
        InstrumentedParentArray.__init__(self, n_or_values)
        self._bind(scheduler)


def interleaved_unite_trial(
    spec,
    n: int,
    edges: Sequence[tuple[int, int]],
    workers: int = 8,
    seed: int = 0,
    switch_prob: float = 0.5,
    queries: Sequence[tuple[int, int]] = (),
):
    """Unite ``edges`` from ``workers`` simulated workers under a random schedule.

    Edges are dealt round-robin after a seeded shuffle.  Returns
    ``(parent_array, query_answers)``; the array is instrumented, so its
    ``violations()`` lists any write that broke root-hook discipline.
    """
    from .unionfind import get_find, is_connected, make_unite, validate_spec

    spec = validate_spec(spec)
    rng = random.Random(seed)
    order = list(edges)
    rng.shuffle(order)
    sched = Interleaver(seed=seed, switch_prob=switch_prob)
    P = ScheduledInstrumentedArray(n, scheduler=sched)
    unite = make_unite(spec, P, seed=seed)
    find = get_find(spec.find_option)
    answers = [None] * len(queries)
    ops = [(0, e) for e in order] + [(1, i) for i in range(len(queries))]
    rng.shuffle(ops)
    shares = [ops[w::workers] for w in range(workers)]

    def job(share):
        def run():
            for kind, item in share:
                if kind == 0:
                    unite(*item)
                else:
                    u, v = queries[item]
                    answers[item] = is_connected(u, v, P, find)
        return run

    sched.run([job(s) for s in shares])
    return P, answers
