"""Worker-pool helpers.

The pool size defaults to ``$CONNECTIT_THREADS`` (or the CPU count).
A worker count of 1 always runs inline on the calling thread.
"""

from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

THREADS_ENV = "CONNECTIT_THREADS"

_pools: dict[int, ThreadPoolExecutor] = {}
_pools_lock = threading.Lock()


def default_workers() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
        if value < 1:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
        return value
    return os.cpu_count() or 1


def resolve_workers(workers: int | None) -> int:
    if workers is None:
        return default_workers()
    if workers < 1:
        raise ValueError("workers must be >= 1")
    return int(workers)


def _pool(workers: int) -> ThreadPoolExecutor:
    with _pools_lock:
        pool = _pools.get(workers)
        if pool is None:
            pool = ThreadPoolExecutor(max_workers=workers, thread_name_prefix="connectit")
            _pools[workers] = pool
        return pool


def chunk_bounds(count: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, count))
    step, extra = divmod(count, parts)
    bounds, lo = [], 0
    for i in range(parts):
        hi = lo + step + (1 if i < extra else 0)
        bounds.append((lo, hi))
        lo = hi
    return bounds


def parallel_for(count: int, body: Callable[[int, int], object], workers: int | None = 1) -> list:
    """Run ``body(lo, hi)`` over a partition of ``range(count)``; returns per-chunk results."""
    workers = resolve_workers(workers)
    if workers == 1 or count < 2:
        return [body(0, count)]
    futures = [_pool(workers).submit(body, lo, hi) for lo, hi in chunk_bounds(count, workers)]
    return [f.result() for f in futures]
