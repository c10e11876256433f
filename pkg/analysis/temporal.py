"""
Interval-bucketed IO counts and five-number summaries for temporal locality.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from errors import EmptySeries, EmptyWorkload
from sources.trace import Workload

DEFAULT_INTERVAL_S = 15
US_PER_S = 1_000_000


@dataclass(frozen=True)
class IntervalSeries:
    interval_s: int
    origin_ts_us: int
    counts: np.ndarray

    def __len__(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class BoxStats:
    min: float
    lower_quartile: float
    median: float
    upper_quartile: float
    max: float

    def to_dict(self) -> dict:
        return {
            "min": self.min,
            "lower_quartile": self.lower_quartile,
            "median": self.median,
            "upper_quartile": self.upper_quartile,
            "max": self.max,
        }


class Variability(str, Enum):
    BURSTY = "bursty"
    STABLE = "stable"


def interval_counts(workload: Workload, interval_s: int = DEFAULT_INTERVAL_S) -> IntervalSeries:
    """Count requests per interval, starting at the workload's first timestamp."""
    if not len(workload):
        raise EmptyWorkload(f"Workload '{workload.volume_id}' has no records")
    if interval_s < 1:
        raise ValueError(f"interval_s must be at least 1, got {interval_s}")

    timestamps = np.fromiter((r.timestamp_us for r in workload.records), dtype=np.int64, count=len(workload))
    origin = int(timestamps.min())
    buckets = (timestamps - origin) // (interval_s * US_PER_S)
    return IntervalSeries(interval_s=interval_s, origin_ts_us=origin, counts=np.bincount(buckets))


def coarsen(series: IntervalSeries, factor: int) -> IntervalSeries:
    """Sum every `factor` adjacent buckets; the origin is unchanged."""
    if factor < 1:
        raise ValueError(f"factor must be at least 1, got {factor}")
    padded = -(-len(series.counts) // factor) * factor
    counts = np.zeros(padded, dtype=series.counts.dtype)
    counts[: len(series.counts)] = series.counts
    return IntervalSeries(
        interval_s=series.interval_s * factor,
        origin_ts_us=series.origin_ts_us,
        counts=counts.reshape(-1, factor).sum(axis=1),
    )


def box_stats(values: Sequence[float]) -> BoxStats:
    """Five-number summary; quartiles interpolate linearly between order statistics."""
    data = np.asarray(values, dtype=float)
    if data.size == 0:
        raise EmptySeries("Cannot summarize an empty series")
    q = np.percentile(data, [0, 25, 50, 75, 100])
    return BoxStats(*(float(v) for v in q))


def classify_variability(series: IntervalSeries, threshold: float = 1.0) -> Variability:
    """Bursty when the interquartile range exceeds threshold x median."""
    stats = box_stats(series.counts)
    if stats.median == 0:
        return Variability.BURSTY
    spread = (stats.upper_quartile - stats.lower_quartile) / stats.median
    return Variability.BURSTY if spread > threshold else Variability.STABLE
