"""Deterministic thread-pool map honouring the CONDTAIL_WORKERS override."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_WORKERS = "CONDTAIL_WORKERS"


def worker_count(workers: int | None = None) -> int:
    if workers is None:
        workers = int(os.environ.get(ENV_WORKERS, "1") or 1)
    return max(1, int(workers))


def pmap(fn, items, workers: int | None = None) -> list:
    """``list(map(fn, items))``, threaded when more than one worker is set.

    Results come back in input order regardless of scheduling.
    """
    items = list(items)
    n = worker_count(workers)
    if n == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
