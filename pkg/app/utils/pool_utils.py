"""
Bounded worker pool for parameter sweeps and enumeration branches
"""

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from ..core.config import settings
from .logging_utils import get_logger

logger = get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def effective_workers(requested: Optional[int], n_items: int) -> int:
    """Bound the requested worker count by LAGCONF_WORKERS and the number of items"""
    cap = settings.workers if requested is None else min(requested, settings.workers)
    return max(1, min(cap, n_items))


def parallel_map(func: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """
    Map func over items, preserving input order

    Workers share nothing; func and items must be picklable when more
    than one worker is used.

    Args:
        func: Module-level function to apply
        items: Inputs
        workers: Requested worker count (capped by settings.workers)

    Returns:
        Results in input order
    """
    items = list(items)
    n_workers = effective_workers(workers, len(items))
    if n_workers == 1:
        return [func(item) for item in items]

    logger.info(f"Fanning out {len(items)} tasks over {n_workers} workers")
    with ProcessPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(func, items))
