"""
Page cache simulation with LRU and ARC replacement.

Requests expand to 4-KiB page touches; reads and writes are identical touches.
Cache sizes are expressed as a fraction of the workload footprint.
"""

import logging
from collections import OrderedDict
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

import pandas as pd

from analysis.workload_stats import footprint
from errors import EmptyWorkload
from sources.trace import Direction, Workload

logger = logging.getLogger(__name__)

DEFAULT_PAGE_SIZE = 4096
DEFAULT_FRACTIONS = (0.01, 0.05, 0.10)
DEFAULT_EPSILON_PP = 2.0
LOW_HIT_THRESHOLD = 0.20


class Algorithm(str, Enum):
    LRU = "lru"
    ARC = "arc"


class PageAccess(NamedTuple):
    page_id: int
    direction: Direction


@dataclass(frozen=True)
class CacheConfig:
    capacity_pages: int
    algorithm: Algorithm = Algorithm.LRU
    page_size_bytes: int = DEFAULT_PAGE_SIZE

    def __post_init__(self):
        if self.capacity_pages < 1:
            raise ValueError(f"capacity_pages must be at least 1, got {self.capacity_pages}")
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))


@dataclass(frozen=True)
class CacheResult:
    accesses: int
    hits: int

    @property
    def misses(self) -> int:
        return self.accesses - self.hits

    @property
    def hit_ratio(self) -> float:
        return self.hits / self.accesses if self.accesses else 0.0


class CurvePoint(NamedTuple):
    size_fraction: float
    capacity_pages: int
    result: CacheResult


@dataclass(frozen=True)
class HitRatioCurve:
    volume_id: str
    algorithm: Algorithm
    points: tuple

    @property
    def fractions(self) -> list:
        return [p.size_fraction for p in self.points]

    @property
    def hit_ratios(self) -> list:
        return [p.result.hit_ratio for p in self.points]


@dataclass(frozen=True)
class AlgorithmComparison:
    size_fraction: float
    capacity_pages: int
    lru: CacheResult
    arc: CacheResult
    preferred: Algorithm


class CacheEffect(str, Enum):
    LOW_HIT = "low_hit"
    GROWING = "growing"
    FLAT = "flat"


class LRUCache:
    """Least-recently-used page cache. The OrderedDict tail is the MRU end."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be at least 1")
        self.capacity = capacity
        self.pages = OrderedDict()

    def __len__(self) -> int:
        return len(self.pages)

    def access(self, page: int) -> bool:
        if page in self.pages:
            self.pages.move_to_end(page)
            return True
        if len(self.pages) >= self.capacity:
            self.pages.popitem(last=False)
        self.pages[page] = None
        return False


class ARCCache:
    """
    Adaptive Replacement Cache.

    T1/T2 hold resident pages seen once/at least twice, B1/B2 are their ghost
    lists (page ids only), p is the adaptive target size of T1. Every list is
    an OrderedDict with the LRU end first.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be at least 1")
        self.capacity = capacity
        self.p = 0.0
        self.t1 = OrderedDict()
        self.t2 = OrderedDict()
        self.b1 = OrderedDict()
        self.b2 = OrderedDict()

    def __len__(self) -> int:
        return len(self.t1) + len(self.t2)

    def _replace(self, in_b2: bool):
        t1 = len(self.t1)
        if t1 >= 1 and (t1 > self.p or (in_b2 and t1 == self.p)):
            page, _ = self.t1.popitem(last=False)
            self.b1[page] = None
        else:
            page, _ = self.t2.popitem(last=False)
            self.b2[page] = None

    def access(self, page: int) -> bool:
        c = self.capacity

        if page in self.t1:
            del self.t1[page]
            self.t2[page] = None
            return True
        if page in self.t2:
            self.t2.move_to_end(page)
            return True

        if page in self.b1:
            delta = 1.0 if len(self.b1) >= len(self.b2) else len(self.b2) / len(self.b1)
            self.p = min(self.p + delta, float(c))
            self._replace(in_b2=False)
            del self.b1[page]
            self.t2[page] = None
            return False

        if page in self.b2:
            delta = 1.0 if len(self.b2) >= len(self.b1) else len(self.b1) / len(self.b2)
            self.p = max(self.p - delta, 0.0)
            self._replace(in_b2=True)
            del self.b2[page]
            self.t2[page] = None
            return False

        l1 = len(self.t1) + len(self.b1)
        if l1 == c:
            if len(self.t1) < c:
                self.b1.popitem(last=False)
                self._replace(in_b2=False)
            else:
                self.t1.popitem(last=False)
        else:
            total = l1 + len(self.t2) + len(self.b2)
            if total >= c:
                if total == 2 * c:
                    self.b2.popitem(last=False)
                self._replace(in_b2=False)
        self.t1[page] = None
        return False


def make_cache(config: CacheConfig):
    if config.algorithm is Algorithm.ARC:
        return ARCCache(config.capacity_pages)
    return LRUCache(config.capacity_pages)


def to_page_sequence(workload: Workload, page_size_bytes: int = DEFAULT_PAGE_SIZE) -> Iterator[PageAccess]:
    """One PageAccess per page covered by each request, ascending, in request order."""
    if page_size_bytes < 1 or page_size_bytes & (page_size_bytes - 1):
        raise ValueError(f"page size must be a power of two, got {page_size_bytes}")
    for record in workload.records:
        first = record.offset_bytes // page_size_bytes
        last = (record.offset_bytes + record.length_bytes - 1) // page_size_bytes
        for page in range(first, last + 1):
            yield PageAccess(page, record.direction)


def _page_ids(accesses: Iterable) -> Iterator[int]:
    for access in accesses:
        yield access.page_id if isinstance(access, PageAccess) else access


def replay(cache, accesses: Iterable) -> Iterator[bool]:
    """Feed accesses (PageAccess or bare page ids) to cache, yielding hit flags."""
    for page in _page_ids(accesses):
        yield cache.access(page)


def simulate(accesses: Iterable, config: CacheConfig) -> CacheResult:
    """Exact hit/miss accounting of one cache run."""
    total = hits = 0
    for hit in replay(make_cache(config), accesses):
        total += 1
        hits += hit
    return CacheResult(accesses=total, hits=hits)


def capacity_for_fraction(fraction: float, footprint_bytes: int, page_size_bytes: int = DEFAULT_PAGE_SIZE) -> int:
    return max(1, int(fraction * footprint_bytes) // page_size_bytes)


def _check_fractions(size_fractions: Sequence[float]) -> list:
    fractions = sorted(size_fractions)
    if not fractions:
        raise ValueError("At least one size fraction is required")
    if any(not 0 < f <= 1 for f in fractions):
        raise ValueError(f"Size fractions must be in (0, 1], got {list(size_fractions)}")
    if any(a == b for a, b in zip(fractions, fractions[1:])):
        raise ValueError(f"Size fractions must be distinct, got {list(size_fractions)}")
    return fractions


def _workload_pages(workload: Workload, page_size_bytes: int) -> list:
    if not len(workload):
        raise EmptyWorkload(f"Workload '{workload.volume_id}' has no records")
    return [access.page_id for access in to_page_sequence(workload, page_size_bytes)]


def hit_ratio_curve(
    workload: Workload,
    algorithm: Algorithm = Algorithm.LRU,
    size_fractions: Sequence[float] = DEFAULT_FRACTIONS,
    page_size_bytes: int = DEFAULT_PAGE_SIZE,
) -> HitRatioCurve:
    """One simulation per cache size, sized as a fraction of the footprint."""
    fractions = _check_fractions(size_fractions)
    pages = _workload_pages(workload, page_size_bytes)
    footprint_bytes = footprint(workload)
    algorithm = Algorithm(algorithm)

    points = []
    for fraction in fractions:
        capacity = capacity_for_fraction(fraction, footprint_bytes, page_size_bytes)
        result = simulate(pages, CacheConfig(capacity, algorithm, page_size_bytes))
        logger.debug(
            "%s %s @ %.3f (%d pages): hit ratio %.4f",
            workload.volume_id, algorithm.value, fraction, capacity, result.hit_ratio,
        )
        points.append(CurvePoint(fraction, capacity, result))
    return HitRatioCurve(workload.volume_id, algorithm, tuple(points))


def convergence_point(curve: HitRatioCurve, epsilon_pp: float = DEFAULT_EPSILON_PP) -> Optional[float]:
    """
    Smallest size fraction after which no later point gains epsilon_pp or more.

    Returns None when even the last step still gains at least epsilon_pp.
    """
    points = curve.points
    if len(points) < 2:
        raise ValueError("A convergence search needs at least two curve points")

    percents = [p.result.hit_ratio * 100.0 for p in points]
    for i in range(len(points) - 1):
        if all(later - percents[i] < epsilon_pp for later in percents[i + 1:]):
            return points[i].size_fraction
    return None


def compare_algorithms(
    workload: Workload,
    size_fractions: Sequence[float] = DEFAULT_FRACTIONS,
    page_size_bytes: int = DEFAULT_PAGE_SIZE,
) -> list:
    """LRU and ARC side by side per size; ties prefer LRU."""
    lru = hit_ratio_curve(workload, Algorithm.LRU, size_fractions, page_size_bytes)
    arc = hit_ratio_curve(workload, Algorithm.ARC, size_fractions, page_size_bytes)
    return compare_curves(lru, arc)


def compare_curves(lru: HitRatioCurve, arc: HitRatioCurve) -> list:
    comparisons = []
    for lru_point, arc_point in zip(lru.points, arc.points):
        preferred = Algorithm.ARC if arc_point.result.hits > lru_point.result.hits else Algorithm.LRU
        comparisons.append(
            AlgorithmComparison(lru_point.size_fraction, lru_point.capacity_pages, lru_point.result, arc_point.result, preferred)
        )
    return comparisons


def classify_cache_effect(
    curve: HitRatioCurve,
    low_threshold: float = LOW_HIT_THRESHOLD,
    epsilon_pp: float = DEFAULT_EPSILON_PP,
) -> CacheEffect:
    ratios = curve.hit_ratios
    if all(r < low_threshold for r in ratios):
        return CacheEffect.LOW_HIT
    if (ratios[-1] - ratios[0]) * 100.0 >= epsilon_pp:
        return CacheEffect.GROWING
    return CacheEffect.FLAT


def curves_frame(curves: Iterable[HitRatioCurve]) -> pd.DataFrame:
    rows = [
        {
            "volume_id": curve.volume_id,
            "algorithm": curve.algorithm.value,
            "size_fraction": point.size_fraction,
            "accesses": point.result.accesses,
            "hits": point.result.hits,
            "hit_ratio": point.result.hit_ratio,
        }
        for curve in curves
        for point in curve.points
    ]
    return pd.DataFrame(rows, columns=["volume_id", "algorithm", "size_fraction", "accesses", "hits", "hit_ratio"])


def comparison_curve(volume_id: str, comparisons: Sequence[AlgorithmComparison], algorithm: Algorithm) -> HitRatioCurve:
    """Rebuild one algorithm's curve from a side-by-side comparison."""
    algorithm = Algorithm(algorithm)
    points = tuple(
        CurvePoint(c.size_fraction, c.capacity_pages, c.arc if algorithm is Algorithm.ARC else c.lru)
        for c in comparisons
    )
    return HitRatioCurve(volume_id, algorithm, points)


def comparisons_frame(comparisons: dict) -> pd.DataFrame:
    """comparisons: volume_id -> list of AlgorithmComparison."""
    rows = [
        {
            "volume_id": volume_id,
            "size_fraction": c.size_fraction,
            "capacity_pages": c.capacity_pages,
            "lru_hit_ratio": c.lru.hit_ratio,
            "arc_hit_ratio": c.arc.hit_ratio,
            "preferred": c.preferred.value,
        }
        for volume_id, rows in comparisons.items()
        for c in rows
    ]
    return pd.DataFrame(
        rows, columns=["volume_id", "size_fraction", "capacity_pages", "lru_hit_ratio", "arc_hit_ratio", "preferred"]
    )
