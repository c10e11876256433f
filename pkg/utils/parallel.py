"""
Order-preserving map over worker processes.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable

logger = logging.getLogger(__name__)


def parallel_map(func: Callable, items: Iterable, jobs: int = 1) -> list:
    """map(func, items) across `jobs` processes; jobs <= 1 stays in-process."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    workers = min(jobs, len(items))
    logger.debug("Fanning %d item(s) out to %d worker(s)", len(items), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
