"""
Simulators: page caches, two-tier placement and the advisor built on them.
"""

from sim.cache import (
    Algorithm,
    AlgorithmComparison,
    ARCCache,
    CacheConfig,
    CacheEffect,
    CacheResult,
    HitRatioCurve,
    LRUCache,
    PageAccess,
    classify_cache_effect,
    compare_algorithms,
    convergence_point,
    hit_ratio_curve,
    replay,
    simulate,
    to_page_sequence,
)
from sim.tiering import (
    CacheDecision,
    CapacityMode,
    MonitorConfig,
    PlacementPolicy,
    TierConfig,
    TieringReport,
    TierSimResult,
    admission_filter,
    dynamic_promotion_step,
    monitored_cache_decision,
    simulate_tiering,
)
from sim.advisor import CacheAction, WorkloadAdvice, advise

__all__ = [
    "Algorithm",
    "AlgorithmComparison",
    "ARCCache",
    "CacheConfig",
    "CacheEffect",
    "CacheResult",
    "HitRatioCurve",
    "LRUCache",
    "PageAccess",
    "classify_cache_effect",
    "compare_algorithms",
    "convergence_point",
    "hit_ratio_curve",
    "replay",
    "simulate",
    "to_page_sequence",
    "CacheDecision",
    "CapacityMode",
    "MonitorConfig",
    "PlacementPolicy",
    "TierConfig",
    "TieringReport",
    "TierSimResult",
    "admission_filter",
    "dynamic_promotion_step",
    "monitored_cache_decision",
    "simulate_tiering",
    "CacheAction",
    "WorkloadAdvice",
    "advise",
]
