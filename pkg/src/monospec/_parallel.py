"""Order-preserving map over replications, optionally in worker processes."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def resolve_threads(threads) -> int:
    if threads is None or threads == 0:
        return os.cpu_count() or 1
    return max(1, int(threads))


def ordered_map(func, items, threads=1):
    """``[func(x) for x in items]``; results never depend on ``threads``."""
    items = list(items)
    workers = min(resolve_threads(threads), len(items))
    if workers <= 1:
        return [func(x) for x in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=chunk))
