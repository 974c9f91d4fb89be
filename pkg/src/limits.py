"""
Engine Limits
=============

Build-time constants and per-run resource caps.

Priority for every cap:
    1. Explicit argument (CLI flag)
    2. LOOPWORKS_* environment variable
    3. EngineConstants default
"""

import os
import threading
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Iterable, List, Optional, TypeVar

from .errors import ConfigError


logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


# =============================================================================
# ENGINE CONSTANTS
# =============================================================================

class EngineConstants:
    """
    Fixed engine parameters.

    MAX_ORDER must cover the Paige loop M*(3) (order 1080); tables are stored
    as uint16 so anything below 65536 would fit.
    """

    MAX_ORDER: int = 2048

    # Subloop enumeration caps (hard errors, never truncation)
    MAX_SUBLOOPS: int = 10 ** 6
    MAX_QUEUE: int = 10 ** 6

    # Brute-force scopes
    ORACLE_BOUND: int = 12        # powerset subloop oracle
    ISOMORPHISM_BOUND: int = 10   # are_isomorphic
    CENSUS_BOUND: int = 6         # enumerate_loops

    THREADS: int = 1

    # Supported field orders for gf(q)
    FIELD_ORDERS = (2, 3, 4, 5, 7, 8, 9)


ENV_PREFIX = "LOOPWORKS_"


# =============================================================================
# RUN LIMITS
# =============================================================================

@dataclass(frozen=True)
class EngineLimits:
    """
    Resource caps for one run.

    Attributes:
        max_subloops: Maximum number of distinct subloops an enumeration may find
        max_queue: Maximum number of pending work items in one enumeration round
        oracle_bound: Largest order accepted by the powerset oracle
        threads: Worker threads for parallel loops (1 = inline)
    """
    max_subloops: int = EngineConstants.MAX_SUBLOOPS
    max_queue: int = EngineConstants.MAX_QUEUE
    oracle_bound: int = EngineConstants.ORACLE_BOUND
    threads: int = EngineConstants.THREADS

    def __post_init__(self):
        for name in ("max_subloops", "max_queue", "oracle_bound", "threads"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")

    @classmethod
    def from_env(cls, **overrides: Optional[int]) -> "EngineLimits":
        """
        Build limits from LOOPWORKS_* variables, then apply explicit overrides.

        Overrides equal to None are ignored so argparse defaults can be passed through.
        """
        values = {}
        for name in ("max_subloops", "max_queue", "oracle_bound", "threads"):
            raw = os.environ.get(ENV_PREFIX + name.upper())
            if raw is None:
                continue
            try:
                values[name] = int(raw)
            except ValueError:
                raise ConfigError(f"{ENV_PREFIX}{name.upper()}={raw!r} is not an integer")
            logger.debug(f"Loaded {name}={values[name]} from environment")
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def with_threads(self, threads: int) -> "EngineLimits":
        return replace(self, threads=threads)


DEFAULT_LIMITS = EngineLimits()


# =============================================================================
# PARALLEL MAP
# =============================================================================

def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> List[R]:
    """
    Apply fn to every item and return results in input order.

    With threads == 1 this is a plain loop; otherwise a thread pool is used.
    Callers must not depend on execution order, only on result order.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def chunked(n: int, threads: int) -> List[range]:
    """Split range(n) into contiguous chunks, a few per worker."""
    if n == 0:
        return []
    pieces = max(1, min(n, threads * 4))
    size = -(-n // pieces)
    return [range(start, min(n, start + size)) for start in range(0, n, size)]


def parallel_all(pred: Callable[[T], bool], items: Iterable[T], threads: int = 1) -> bool:
    """
    True iff pred holds for every item; stops scheduling new work after a failure.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return all(pred(item) for item in items)
    failed = threading.Event()

    def guarded(item: T) -> bool:
        if failed.is_set():
            return False
        ok = pred(item)
        if not ok:
            failed.set()
        return ok

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(guarded, items))
    return all(results) and not failed.is_set()
