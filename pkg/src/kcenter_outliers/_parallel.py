"""Thread fan-out controlled by the ``KCO_THREADS`` environment variable.

Work is always split the same way regardless of the thread count, so the
numbers produced never depend on the degree of parallelism.
"""

from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

# Fixed row-block size for distance fan-out.
BLOCK_ROWS = 8192

_local = threading.local()
_executors: dict[int, ThreadPoolExecutor] = {}
_lock = threading.Lock()


def n_threads() -> int:
    raw = os.environ.get("KCO_THREADS", "").strip()
    if raw:
        try:
            value = int(raw)
        except ValueError:
            value = 0
        if value >= 1:
            return value
    return os.cpu_count() or 1


def _executor(workers: int) -> ThreadPoolExecutor:
    with _lock:
        ex = _executors.get(workers)
        if ex is None:
            ex = ThreadPoolExecutor(max_workers=workers, initializer=_mark_worker)
            _executors[workers] = ex
        return ex


def _mark_worker() -> None:
    _local.worker = True


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Ordered map; runs serially inside pool workers to avoid nested waits."""
    items = list(items)
    workers = n_threads()
    if workers == 1 or len(items) <= 1 or getattr(_local, "worker", False):
        return [fn(item) for item in items]
    return list(_executor(workers).map(fn, items))


def row_blocks(n: int) -> list[slice]:
    return [slice(start, min(start + BLOCK_ROWS, n)) for start in range(0, n, BLOCK_ROWS)]
