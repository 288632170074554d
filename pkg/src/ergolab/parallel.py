"""Thread-pool helpers whose results are always reduced in input order."""

import logging
import os
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "ERGOLAB_THREADS"


def worker_count() -> int:
    """
    Number of worker threads: ``ERGOLAB_THREADS`` if set, otherwise the CPU count.

    Raises:
        ValueError: If ``ERGOLAB_THREADS`` is not a positive integer.
    """
    raw = os.environ.get(THREADS_ENV)
    if raw is None or not raw.strip():
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError as e:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from e
    if value < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value


def map_ordered(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """``[fn(item) for item in items]``, evaluated on the worker pool."""
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def first_ordered(fn: Callable[[T], R | None], items: Sequence[T]) -> tuple[int, R] | None:
    """
    Index and value of the first item (in input order) for which ``fn`` is not None.

    Items are evaluated in chunks on the worker pool; a later item never wins over an
    earlier one, whatever the thread count.
    """
    chunk = max(1, 4 * worker_count())
    for offset in range(0, len(items), chunk):
        results = map_ordered(fn, items[offset:offset + chunk])
        for index, result in enumerate(results):
            if result is not None:
                return offset + index, result
    return None
