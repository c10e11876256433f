"""
Discrete-interval two-tier storage simulator.

Time advances in decision intervals on a clock shared by all workloads,
starting at the earliest request. Within an interval every request is
served at the latency of the tier holding its macro region. Placement
changes only at interval boundaries and uses only the interval that just
ended. Migration is a per-interval byte budget, not extra request latency.
"""

import heapq
import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

import pandas as pd

from analysis.concentration import SliceCounts, concentrated_pages
from analysis.workload_stats import Metric, footprint, select_top_workloads
from errors import CapacityInfeasible
from sim.cache import Algorithm, CacheConfig, CacheResult, capacity_for_fraction, make_cache
from sources.trace import Direction, Workload

logger = logging.getLogger(__name__)

GIB = 1 << 30
MIB = 1 << 20
US_PER_S = 1_000_000
AGGREGATE_ID = "*"


class PlacementPolicy(str, Enum):
    ALL_SECOND = "all_second"
    ALL_FIRST = "all_first"
    DYNAMIC_PROMOTION = "dynamic"
    MONITORED_CACHE = "monitored_cache"


class CapacityMode(str, Enum):
    STRICT = "strict"
    BEST_EFFORT = "best_effort"


class CacheDecision(str, Enum):
    KEEP_CACHE = "keep_cache"
    BYPASS_TO_FIRST_TIER = "bypass_to_first_tier"
    BYPASS_TO_SECOND_TIER = "bypass_to_second_tier"


class RegionKey(NamedTuple):
    volume_id: str
    page_id: int


@dataclass(frozen=True)
class TierConfig:
    tier1_capacity_bytes: int
    tier1_latency_us: float = 100.0
    tier2_latency_us: float = 5000.0
    # Write latencies default to the read latencies
    tier1_write_latency_us: Optional[float] = None
    tier2_write_latency_us: Optional[float] = None
    migration_bandwidth_bytes_per_s: float = 256 * MIB
    decision_interval_s: int = 15
    promotion_unit_bytes: int = GIB
    capacity_mode: CapacityMode = CapacityMode.STRICT

    def __post_init__(self):
        object.__setattr__(self, "capacity_mode", CapacityMode(self.capacity_mode))
        if self.tier1_capacity_bytes <= 0 or self.promotion_unit_bytes <= 0:
            raise ValueError("Capacities must be positive")
        if self.migration_bandwidth_bytes_per_s <= 0:
            raise ValueError("Migration bandwidth must be positive")
        if self.decision_interval_s < 1:
            raise ValueError("decision_interval_s must be at least 1")
        for direction in Direction:
            if not 0 <= self.latency(True, direction) < self.latency(False, direction):
                raise ValueError(f"First-tier {direction.name.lower()} latency must be below the second tier's")

    def latency(self, first_tier: bool, direction: Direction) -> float:
        if first_tier:
            if direction is Direction.WRITE and self.tier1_write_latency_us is not None:
                return self.tier1_write_latency_us
            return self.tier1_latency_us
        if direction is Direction.WRITE and self.tier2_write_latency_us is not None:
            return self.tier2_write_latency_us
        return self.tier2_latency_us

    @property
    def capacity_units(self) -> int:
        return self.tier1_capacity_bytes // self.promotion_unit_bytes

    @property
    def migration_budget_bytes(self) -> int:
        return int(self.migration_bandwidth_bytes_per_s * self.decision_interval_s)

    @property
    def budget_units(self) -> int:
        return self.migration_budget_bytes // self.promotion_unit_bytes

    def to_dict(self) -> dict:
        return {
            "tier1_capacity_bytes": self.tier1_capacity_bytes,
            "tier1_latency_us": self.tier1_latency_us,
            "tier2_latency_us": self.tier2_latency_us,
            "tier1_write_latency_us": self.tier1_write_latency_us,
            "tier2_write_latency_us": self.tier2_write_latency_us,
            "migration_bandwidth_bytes_per_s": self.migration_bandwidth_bytes_per_s,
            "decision_interval_s": self.decision_interval_s,
            "promotion_unit_bytes": self.promotion_unit_bytes,
            "capacity_mode": self.capacity_mode.value,
        }


@dataclass(frozen=True)
class MonitorConfig:
    """Per-workload first-tier cache used by the monitored-cache policy."""

    cache_fraction: float = 0.05
    algorithm: Algorithm = Algorithm.ARC
    page_size_bytes: int = 4096
    low_threshold: float = 0.20
    consecutive_n: int = 3

    def __post_init__(self):
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        if not 0 < self.cache_fraction <= 1:
            raise ValueError(f"cache_fraction must be in (0, 1], got {self.cache_fraction}")
        if self.consecutive_n < 1:
            raise ValueError("consecutive_n must be at least 1")

    def to_dict(self) -> dict:
        return {
            "cache_fraction": self.cache_fraction,
            "algorithm": self.algorithm.value,
            "page_size_bytes": self.page_size_bytes,
            "low_threshold": self.low_threshold,
            "consecutive_n": self.consecutive_n,
        }


@dataclass(frozen=True)
class IntervalStat:
    interval_index: int
    requests: int
    tier1_requests: int
    mean_latency_us: float
    bytes_migrated: int = 0
    tier1_bytes: int = 0


@dataclass
class TierSimResult:
    volume_id: str
    requests_served: int = 0
    tier1_requests: int = 0
    mean_latency_us: float = 0.0
    promotions: int = 0
    demotions: int = 0
    bytes_migrated: int = 0
    intervals: list = field(default_factory=list)

    @property
    def tier1_served_fraction(self) -> float:
        return self.tier1_requests / self.requests_served if self.requests_served else 0.0

    def to_dict(self) -> dict:
        return {
            "volume_id": self.volume_id,
            "requests_served": self.requests_served,
            "tier1_requests": self.tier1_requests,
            "tier1_served_fraction": self.tier1_served_fraction,
            "mean_latency_us": self.mean_latency_us,
            "promotions": self.promotions,
            "demotions": self.demotions,
            "bytes_migrated": self.bytes_migrated,
        }


@dataclass
class TieringReport:
    policy: PlacementPolicy
    config: TierConfig
    capacity_mode_used: str
    per_workload: dict
    aggregate: TierSimResult
    decisions: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "policy": self.policy.value,
            "config": self.config.to_dict(),
            "capacity_mode_used": self.capacity_mode_used,
            "aggregate": self.aggregate.to_dict(),
            "workloads": [r.to_dict() for r in self.per_workload.values()],
            "decisions": dict(self.decisions),
        }


class PromotionStep(NamedTuple):
    placement: frozenset
    promotions: tuple
    demotions: tuple


class _LatencyTally:
    """Request counts per latency value; the mean is a weighted sum of distinct latencies."""

    def __init__(self):
        self.by_latency = Counter()
        self.requests = 0
        self.tier1 = 0

    def add(self, latency: float, first_tier: bool):
        self.by_latency[latency] += 1
        self.requests += 1
        self.tier1 += first_tier

    def merge(self, other: "_LatencyTally"):
        self.by_latency.update(other.by_latency)
        self.requests += other.requests
        self.tier1 += other.tier1

    def mean(self) -> float:
        if not self.requests:
            return 0.0
        latencies = sorted(self.by_latency)
        value = sum((n / self.requests) * lat for lat, n in sorted(self.by_latency.items()))
        return min(max(value, latencies[0]), latencies[-1])


def admission_filter(summaries: Sequence, fraction: float) -> set:
    """Volumes busy enough over the whole trace to earn first-tier space."""
    return set(select_top_workloads(summaries, fraction, Metric.READ_WRITE))


def monitored_cache_decision(
    history: Sequence[CacheResult],
    low_threshold: float = 0.20,
    consecutive_n: int = 3,
    performance_critical: bool = False,
) -> CacheDecision:
    """Bypass the cache once the last consecutive_n intervals all hit below low_threshold."""
    if not history:
        raise ValueError("Cache history must not be empty")
    if consecutive_n < 1:
        raise ValueError("consecutive_n must be at least 1")
    recent = history[-consecutive_n:]
    if len(recent) < consecutive_n or any(r.hit_ratio >= low_threshold for r in recent):
        return CacheDecision.KEEP_CACHE
    if performance_critical:
        return CacheDecision.BYPASS_TO_FIRST_TIER
    return CacheDecision.BYPASS_TO_SECOND_TIER


def dynamic_promotion_step(
    interval_counts: Mapping[str, SliceCounts],
    placement: Iterable[RegionKey],
    config: TierConfig,
    eligible: Optional[set] = None,
) -> PromotionStep:
    """
    Promote the concentrated regions of the interval that just ended.

    Candidates are the union of every workload's concentrated set, busiest
    first, ties by (volume_id, page_id). When the first tier is full the
    resident with the lowest count in the interval is evicted, but only for a
    busier candidate. Each promotion or demotion spends one unit of the
    migration budget.
    """
    resident = set(placement)
    counts = {}
    candidates = []
    for volume_id, slice_counts in interval_counts.items():
        if slice_counts.is_empty:
            continue
        for page, count in slice_counts.counts.items():
            counts[RegionKey(volume_id, page)] = count
        if eligible is not None and volume_id not in eligible:
            continue
        for page in concentrated_pages(slice_counts).pages:
            candidates.append(RegionKey(volume_id, page))
    candidates.sort(key=lambda key: (-counts[key], key))

    budget = config.budget_units
    capacity = config.capacity_units
    promotions, demotions = [], []
    evicted = set()

    for candidate in candidates:
        if candidate in resident or candidate in evicted:
            continue
        if len(resident) < capacity:
            if budget < 1:
                break
            resident.add(candidate)
            promotions.append(candidate)
            budget -= 1
            continue

        victim = min(resident, key=lambda key: (counts.get(key, 0), key), default=None)
        if victim is None or counts.get(victim, 0) >= counts[candidate]:
            break
        if budget < 2:
            break
        resident.remove(victim)
        evicted.add(victim)
        demotions.append(victim)
        resident.add(candidate)
        promotions.append(candidate)
        budget -= 2

    return PromotionStep(frozenset(resident), tuple(promotions), tuple(demotions))


class TieringSimulator:
    """State machine for one policy run over a set of workloads."""

    def __init__(
        self,
        workloads: Iterable[Workload],
        config: TierConfig,
        policy: PlacementPolicy,
        eligible: Optional[set] = None,
        performance_critical: Iterable[str] = (),
        monitor: Optional[MonitorConfig] = None,
    ):
        self.config = config
        self.policy = PlacementPolicy(policy)
        self.monitor = monitor or MonitorConfig()
        workloads = sorted((w for w in workloads if len(w)), key=lambda w: w.volume_id)
        self.workloads = {w.volume_id: w for w in workloads}
        self.eligible = set(self.workloads) if eligible is None else set(eligible) & set(self.workloads)
        self.performance_critical = set(performance_critical)
        self.capacity_mode_used = "fits"

        self.resident = set()
        self.resident_units = Counter()
        self.whole_first = set()
        self.tallies = {vid: _LatencyTally() for vid in self.workloads}
        self.results = {vid: TierSimResult(vid) for vid in self.workloads}
        self.aggregate_intervals = []

        # monitored-cache state
        self.caches = {}
        self.cache_bytes = {}
        self.cache_total = 0
        self.cache_history = {vid: [] for vid in self.workloads}
        self.cache_state = {}
        self.pending = []
        self.cumulative_counts = Counter()
        self.decisions = {}

    # placement setup

    def _tier1_bytes(self) -> int:
        return len(self.resident) * self.config.promotion_unit_bytes + self.cache_total

    def _volume_tier1_bytes(self, vid: str) -> int:
        return self.resident_units[vid] * self.config.promotion_unit_bytes + self.cache_bytes.get(vid, 0)

    def _free_units(self) -> int:
        return (self.config.tier1_capacity_bytes - self._tier1_bytes()) // self.config.promotion_unit_bytes

    def _setup_all_first(self):
        required = sum(footprint(self.workloads[vid]) for vid in self.eligible)
        if required <= self.config.tier1_capacity_bytes:
            self.whole_first = set(self.eligible)
            return
        if self.config.capacity_mode is CapacityMode.STRICT:
            raise CapacityInfeasible(
                f"Footprint of {len(self.eligible)} workload(s) is {required} bytes, "
                f"first tier holds {self.config.tier1_capacity_bytes}",
                required_bytes=required,
                capacity_bytes=self.config.tier1_capacity_bytes,
            )
        self.capacity_mode_used = CapacityMode.BEST_EFFORT.value
        counts = Counter()
        for vid in self.eligible:
            for record in self.workloads[vid].records:
                counts[RegionKey(vid, record.offset_bytes // self.config.promotion_unit_bytes)] += 1
        ranked = sorted(counts, key=lambda key: (-counts[key], key))
        for key in ranked[: self.config.capacity_units]:
            self.resident.add(key)
            self.resident_units[key.volume_id] += 1
        logger.info("Best-effort placement pinned %d hottest region(s)", len(self.resident))

    def _setup_dynamic(self):
        if self.config.capacity_units < 1:
            raise CapacityInfeasible(
                "First tier is smaller than one promotion unit",
                required_bytes=self.config.promotion_unit_bytes,
                capacity_bytes=self.config.tier1_capacity_bytes,
            )
        if self.config.budget_units < 1:
            logger.warning("Migration budget is below one promotion unit per interval; nothing will move")
        # placement is bounded per step, so the configured mode is what applies
        self.capacity_mode_used = self.config.capacity_mode.value

    def _setup_monitored_cache(self):
        monitor = self.monitor
        sizes = {}
        for vid in self.eligible:
            pages = capacity_for_fraction(monitor.cache_fraction, footprint(self.workloads[vid]), monitor.page_size_bytes)
            sizes[vid] = pages
        required = sum(pages * monitor.page_size_bytes for pages in sizes.values())
        if required > self.config.tier1_capacity_bytes:
            if self.config.capacity_mode is CapacityMode.STRICT:
                raise CapacityInfeasible(
                    f"Caches need {required} bytes, first tier holds {self.config.tier1_capacity_bytes}",
                    required_bytes=required,
                    capacity_bytes=self.config.tier1_capacity_bytes,
                )
            self.capacity_mode_used = CapacityMode.BEST_EFFORT.value

        busiest = sorted(sizes, key=lambda vid: (-len(self.workloads[vid]), vid))
        used = 0
        for vid in busiest:
            size_bytes = sizes[vid] * monitor.page_size_bytes
            if used + size_bytes > self.config.tier1_capacity_bytes:
                continue
            used += size_bytes
            self.caches[vid] = make_cache(CacheConfig(sizes[vid], monitor.algorithm, monitor.page_size_bytes))
            self.cache_bytes[vid] = size_bytes
            self.cache_total += size_bytes
            self.cache_state[vid] = CacheDecision.KEEP_CACHE
        for vid in self.workloads:
            self.cache_state.setdefault(vid, None)

    # serving

    def _serve(self, record, interval_pages: dict) -> bool:
        vid = record.volume_id
        if self.policy is PlacementPolicy.MONITORED_CACHE and self.cache_state[vid] is CacheDecision.KEEP_CACHE:
            page_size = self.monitor.page_size_bytes
            first = record.offset_bytes // page_size
            last = (record.offset_bytes + record.length_bytes - 1) // page_size
            flags = [self.caches[vid].access(page) for page in range(first, last + 1)]
            accesses, hits = interval_pages.get(vid, (0, 0))
            interval_pages[vid] = (accesses + len(flags), hits + sum(flags))
            return all(flags)
        if vid in self.whole_first:
            return True
        return RegionKey(vid, record.offset_bytes // self.config.promotion_unit_bytes) in self.resident

    # interval boundaries

    def _apply(self, promotions: Sequence[RegionKey], demotions: Sequence[RegionKey]) -> dict:
        moved = Counter()
        for key in demotions:
            self.resident.discard(key)
            self.resident_units[key.volume_id] -= 1
            self.results[key.volume_id].demotions += 1
            moved[key.volume_id] += self.config.promotion_unit_bytes
        for key in promotions:
            self.resident.add(key)
            self.resident_units[key.volume_id] += 1
            self.results[key.volume_id].promotions += 1
            moved[key.volume_id] += self.config.promotion_unit_bytes
        return moved

    def _dynamic_boundary(self, interval_counts: Counter) -> dict:
        per_volume = {}
        for key, count in interval_counts.items():
            per_volume.setdefault(key.volume_id, {})[key.page_id] = count
        slices = {vid: SliceCounts(0, pages) for vid, pages in per_volume.items()}
        step = dynamic_promotion_step(slices, self.resident, self.config, self.eligible)
        return self._apply(step.promotions, step.demotions)

    def _monitored_boundary(self, interval_index: int, interval_pages: dict) -> dict:
        monitor = self.monitor
        for vid, (accesses, hits) in sorted(interval_pages.items()):
            if self.cache_state[vid] is not CacheDecision.KEEP_CACHE:
                continue
            self.cache_history[vid].append(CacheResult(accesses, hits))
            decision = monitored_cache_decision(
                self.cache_history[vid],
                monitor.low_threshold,
                monitor.consecutive_n,
                vid in self.performance_critical,
            )
            if decision is CacheDecision.KEEP_CACHE:
                continue
            logger.info("Interval %d: %s -> %s", interval_index, vid, decision.value)
            self.decisions[vid] = {"interval": interval_index, "decision": decision.value}
            self.cache_state[vid] = decision
            del self.caches[vid]
            self.cache_total -= self.cache_bytes.pop(vid)
            if decision is CacheDecision.BYPASS_TO_FIRST_TIER:
                self._queue_workload(vid)

        promotions = []
        budget = self.config.budget_units
        free = self._free_units()
        while self.pending and budget >= 1 and free >= 1:
            promotions.append(self.pending.pop(0))
            budget -= 1
            free -= 1
        return self._apply(promotions, ())

    def _queue_workload(self, vid: str):
        unit = self.config.promotion_unit_bytes
        regions = [RegionKey(vid, page) for page in range(-(-footprint(self.workloads[vid]) // unit))]
        regions.sort(key=lambda key: (-self.cumulative_counts[key], key))
        free = self._free_units() - len(self.pending)
        if len(regions) > free:
            if self.config.capacity_mode is CapacityMode.STRICT:
                raise CapacityInfeasible(
                    f"Workload {vid} needs {len(regions)} region(s) on the first tier, {max(free, 0)} free",
                    required_bytes=len(regions) * unit,
                    capacity_bytes=self.config.tier1_capacity_bytes,
                )
            self.capacity_mode_used = CapacityMode.BEST_EFFORT.value
            regions = regions[: max(free, 0)]
        self.pending.extend(regions)

    # main loop

    def _close_interval(self, index: int, tallies: dict, moved: dict):
        # per-workload series only carry intervals with requests or migrations
        total = _LatencyTally()
        for vid in sorted(set(tallies) | set(moved)):
            tally = tallies.get(vid, _LatencyTally())
            total.merge(tally)
            self.results[vid].intervals.append(
                IntervalStat(index, tally.requests, tally.tier1, tally.mean(), moved.get(vid, 0), self._volume_tier1_bytes(vid))
            )
        self.aggregate_intervals.append(
            IntervalStat(index, total.requests, total.tier1, total.mean(), sum(moved.values()), self._tier1_bytes())
        )

    def _close_quiet_intervals(self, start: int, stop: int):
        tier1_bytes = self._tier1_bytes()
        self.aggregate_intervals.extend(IntervalStat(i, 0, 0, 0.0, 0, tier1_bytes) for i in range(start, stop))

    def run(self) -> TieringReport:
        if self.policy is PlacementPolicy.ALL_FIRST:
            self._setup_all_first()
        elif self.policy is PlacementPolicy.DYNAMIC_PROMOTION:
            self._setup_dynamic()
        elif self.policy is PlacementPolicy.MONITORED_CACHE:
            self._setup_monitored_cache()

        if self.workloads:
            origin = min(w.first_ts_us for w in self.workloads.values())
            interval_us = self.config.decision_interval_s * US_PER_S
            merged = heapq.merge(*(w.records for w in self.workloads.values()), key=lambda r: r.timestamp_us)
            expected = 0
            for index, group in itertools.groupby(merged, key=lambda r: (r.timestamp_us - origin) // interval_us):
                self._close_quiet_intervals(expected, index)
                self._run_interval(index, group)
                expected = index + 1

        return self._report()

    def _run_interval(self, index: int, records: Iterable):
        tallies = {}
        interval_counts = Counter()
        interval_pages = {}
        unit = self.config.promotion_unit_bytes
        for record in records:
            first_tier = self._serve(record, interval_pages)
            latency = self.config.latency(first_tier, record.direction)
            tally = tallies.setdefault(record.volume_id, _LatencyTally())
            tally.add(latency, first_tier)
            self.tallies[record.volume_id].add(latency, first_tier)
            key = RegionKey(record.volume_id, record.offset_bytes // unit)
            interval_counts[key] += 1
            self.cumulative_counts[key] += 1

        moved = {}
        if self.policy is PlacementPolicy.DYNAMIC_PROMOTION:
            moved = self._dynamic_boundary(interval_counts)
        elif self.policy is PlacementPolicy.MONITORED_CACHE:
            moved = self._monitored_boundary(index, interval_pages)
        self._close_interval(index, tallies, moved)

    def _report(self) -> TieringReport:
        total = _LatencyTally()
        aggregate = TierSimResult(AGGREGATE_ID, intervals=self.aggregate_intervals)
        unit = self.config.promotion_unit_bytes
        for vid, result in self.results.items():
            tally = self.tallies[vid]
            result.requests_served = tally.requests
            result.tier1_requests = tally.tier1
            result.mean_latency_us = tally.mean()
            result.bytes_migrated = (result.promotions + result.demotions) * unit
            total.merge(tally)
            aggregate.promotions += result.promotions
            aggregate.demotions += result.demotions
        aggregate.requests_served = total.requests
        aggregate.tier1_requests = total.tier1
        aggregate.mean_latency_us = total.mean()
        aggregate.bytes_migrated = (aggregate.promotions + aggregate.demotions) * unit
        return TieringReport(
            policy=self.policy,
            config=self.config,
            capacity_mode_used=self.capacity_mode_used,
            per_workload=dict(self.results),
            aggregate=aggregate,
            decisions=dict(self.decisions),
        )


def simulate_tiering(
    workloads: Iterable[Workload],
    config: TierConfig,
    policy: PlacementPolicy,
    eligible: Optional[set] = None,
    performance_critical: Iterable[str] = (),
    monitor: Optional[MonitorConfig] = None,
) -> TieringReport:
    """Run one placement policy over the workloads; eligible=None admits every workload."""
    if isinstance(workloads, Mapping):
        workloads = workloads.values()
    return TieringSimulator(workloads, config, policy, eligible, performance_critical, monitor).run()


def intervals_frame(report: TieringReport) -> pd.DataFrame:
    rows = []
    for result in [report.aggregate, *report.per_workload.values()]:
        for stat in result.intervals:
            rows.append({
                "volume_id": result.volume_id,
                "interval": stat.interval_index,
                "requests": stat.requests,
                "tier1_requests": stat.tier1_requests,
                "mean_latency_us": stat.mean_latency_us,
                "bytes_migrated": stat.bytes_migrated,
                "tier1_bytes": stat.tier1_bytes,
            })
    return pd.DataFrame(
        rows,
        columns=["volume_id", "interval", "requests", "tier1_requests", "mean_latency_us", "bytes_migrated", "tier1_bytes"],
    )
