"""
bounded thread pool for embarrassingly parallel sweeps.
results always come back in input order, so output never depends on scheduling.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar


T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "SDOF_THREADS"


def max_workers() -> int:
    """
    worker count from ``SDOF_THREADS``; 0, unset or unparseable means all cores.
    """
    raw = os.getenv(THREADS_ENV, "0")
    try:
        requested = int(raw)
    except ValueError:
        logging.warning(f"action: parse_threads | value: {raw} | result: ignored")
        requested = 0

    cores = os.cpu_count() or 1
    if requested <= 0:
        return cores
    return min(requested, cores)


def ordered_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """
    apply fn to every item, possibly concurrently, keeping input order.
    """
    items = list(items)
    workers = max_workers()

    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]

    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="sdof_worker") as pool:
        return list(pool.map(fn, items))
