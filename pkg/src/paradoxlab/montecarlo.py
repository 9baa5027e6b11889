"""Chunked trial execution with thread-count-independent results."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

from .errors import DomainError

CHUNK_SIZE = 16384

T = TypeVar("T")


def run_chunks(
    n_trials: int, worker: Callable[[int, int], T], threads: int = 1
) -> list[T]:
    """Run ``worker(lo, hi)`` over fixed-size index chunks, in index order.

    The chunking is independent of ``threads``, and workers must be pure
    functions of the index range, so the combined result is identical for
    any thread count.
    """
    if threads < 1:
        raise DomainError(f"threads must be >= 1, got {threads}")
    ranges = [
        (lo, min(lo + CHUNK_SIZE, n_trials)) for lo in range(0, n_trials, CHUNK_SIZE)
    ]
    if threads == 1 or len(ranges) <= 1:
        return [worker(lo, hi) for lo, hi in ranges]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda r: worker(*r), ranges))
