"""
Per-workload tiering advice from whole-trace statistics and cache curves.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence

import pandas as pd

from analysis.workload_stats import WorkloadSummary
from sim.cache import (
    DEFAULT_EPSILON_PP,
    LOW_HIT_THRESHOLD,
    Algorithm,
    CacheEffect,
    classify_cache_effect,
    comparison_curve,
    convergence_point,
)
from sim.tiering import admission_filter

logger = logging.getLogger(__name__)


class CacheAction(str, Enum):
    USE_CACHE = "use_cache"
    BYPASS_TO_FIRST_TIER = "bypass_to_first_tier"
    BYPASS_TO_SECOND_TIER = "bypass_to_second_tier"


@dataclass(frozen=True)
class WorkloadAdvice:
    volume_id: str
    tier1_eligible: bool
    cache_action: CacheAction
    algorithm: Optional[Algorithm]
    cache_fraction: Optional[float]
    cache_effect: CacheEffect
    best_hit_ratio: float

    def to_dict(self) -> dict:
        return {
            "volume_id": self.volume_id,
            "tier1_eligible": self.tier1_eligible,
            "cache_action": self.cache_action.value,
            "algorithm": self.algorithm.value if self.algorithm else None,
            "cache_fraction": self.cache_fraction,
            "cache_effect": self.cache_effect.value,
            "best_hit_ratio": self.best_hit_ratio,
        }


ADVICE_COLUMNS = [
    "volume_id", "tier1_eligible", "cache_action", "algorithm",
    "cache_fraction", "cache_effect", "best_hit_ratio",
]


def _preferred_algorithm(comparisons: Sequence) -> Algorithm:
    arc_wins = sum(1 for c in comparisons if c.preferred is Algorithm.ARC)
    return Algorithm.ARC if 2 * arc_wins > len(comparisons) else Algorithm.LRU


def advise(
    summaries: Sequence[WorkloadSummary],
    comparisons: Mapping[str, Sequence],
    fraction: float = 0.5,
    low_threshold: float = LOW_HIT_THRESHOLD,
    epsilon_pp: float = DEFAULT_EPSILON_PP,
    performance_critical: Iterable[str] = (),
) -> list:
    """
    One recommendation per workload, busiest first.

    A workload whose cache hit ratio stays below low_threshold at every size
    bypasses the cache; performance-critical workloads that pass the
    admission filter go to the first tier, the rest to the second. Other
    workloads keep a cache of the algorithm that wins most sizes, sized at
    the convergence point (or the largest size when the curve never settles).
    """
    eligible = admission_filter(summaries, fraction)
    critical = set(performance_critical)
    advice = []
    for summary in sorted(summaries, key=lambda s: (-s.total_count, s.volume_id)):
        vid = summary.volume_id
        rows = comparisons.get(vid)
        if not rows:
            logger.debug("No cache curve for %s, skipping", vid)
            continue
        algorithm = _preferred_algorithm(rows)
        curve = comparison_curve(vid, rows, algorithm)
        effect = classify_cache_effect(curve, low_threshold, epsilon_pp)
        best = max(curve.hit_ratios)

        if effect is CacheEffect.LOW_HIT:
            to_first = vid in critical and vid in eligible
            action = CacheAction.BYPASS_TO_FIRST_TIER if to_first else CacheAction.BYPASS_TO_SECOND_TIER
            advice.append(WorkloadAdvice(vid, vid in eligible, action, None, None, effect, best))
            continue

        size = convergence_point(curve, epsilon_pp) if len(curve.points) > 1 else None
        if size is None:
            size = curve.fractions[-1]
        advice.append(WorkloadAdvice(vid, vid in eligible, CacheAction.USE_CACHE, algorithm, size, effect, best))
    return advice


def advice_frame(advice: Iterable[WorkloadAdvice]) -> pd.DataFrame:
    return pd.DataFrame([a.to_dict() for a in advice], columns=ADVICE_COLUMNS)
