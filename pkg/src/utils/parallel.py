"""
Ordered thread-pool map.

Work is split into fixed-size chunks and results are returned in input order,
so a reduction over the output is independent of the worker count.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

T = TypeVar("T")
R = TypeVar("R")

CHUNK_SIZE = 1024

_thread_count = 0


def configure_threads(count: int) -> None:
    """Set the pool size; 0 means one worker per logical core."""
    global _thread_count
    if count < 0:
        raise ValueError("Thread count must be non-negative")
    _thread_count = count


def worker_count() -> int:
    return _thread_count or os.cpu_count() or 1


def ordered_map(func: Callable[[T], R], items: Iterable[T],
                threads: Optional[int] = None, chunk_size: int = CHUNK_SIZE) -> List[R]:
    """
    Apply func to every item using a thread pool.

    Args:
        func: Pure function of one item
        items: Inputs
        threads: Pool size override (defaults to the configured count)
        chunk_size: Items per submitted task

    Returns:
        List of results in input order
    """
    items = list(items)
    workers = threads if threads else worker_count()
    if workers <= 1 or len(items) <= chunk_size:
        return [func(item) for item in items]

    chunks = [items[i:i + chunk_size] for i in range(0, len(items), chunk_size)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = pool.map(lambda chunk: [func(item) for item in chunk], chunks)
        return [value for chunk in results for value in chunk]
