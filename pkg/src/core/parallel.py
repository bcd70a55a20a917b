"""Worker-pool helpers with deterministic result ordering."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

import psutil

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def resolve_thread_count(requested: int = 0) -> int:
    """
    Resolve a worker count.

    Args:
        requested: Requested workers; 0 means one per physical core

    Returns:
        Positive worker count
    """
    if requested > 0:
        return requested
    cores = psutil.cpu_count(logical=False) or psutil.cpu_count() or 1
    return max(1, cores)


def ordered_map(
    fn: Callable[[T], R],
    items: Iterable[T],
    threads: int = 0,
    chunk_size: int = 1,
) -> list[R]:
    """
    Apply ``fn`` to every item, possibly in parallel, preserving input order.

    Results are always returned in input order, so any reduction over them is
    independent of how the work was scheduled.

    Args:
        fn: Function to apply
        items: Work items
        threads: Worker count (0 = auto)
        chunk_size: Items per submitted task

    Returns:
        List of results in the order of ``items``
    """
    items = list(items)
    workers = resolve_thread_count(threads)

    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]

    chunks = [items[i:i + chunk_size] for i in range(0, len(items), chunk_size)]
    logger.debug("Dispatching %d items in %d chunks to %d workers", len(items), len(chunks), workers)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        chunk_results = pool.map(lambda chunk: [fn(item) for item in chunk], chunks)
        return [result for chunk in chunk_results for result in chunk]
