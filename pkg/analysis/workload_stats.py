"""
Per-workload aggregates and selection of the high-traffic workload subset.
"""

from dataclasses import asdict, dataclass, fields
from enum import Enum
from typing import Iterable, Optional, Sequence

import pandas as pd

from errors import EmptyWorkload
from sources.trace import Direction, Workload

KIB = 1 << 10
GIB = 1 << 30

DEFAULT_SIZE_BOUNDS = (4 * KIB, 8 * KIB, 16 * KIB, 32 * KIB, 64 * KIB)


class Metric(str, Enum):
    READ = "read"
    WRITE = "write"
    READ_WRITE = "readwrite"


@dataclass(frozen=True)
class WorkloadSummary:
    volume_id: str
    read_count: int
    write_count: int
    total_count: int
    read_bytes: int
    write_bytes: int
    footprint_bytes: int
    first_ts_us: int
    last_ts_us: int

    @property
    def footprint_gib(self) -> float:
        return self.footprint_bytes / GIB

    def count(self, metric: Metric) -> int:
        if metric is Metric.READ:
            return self.read_count
        if metric is Metric.WRITE:
            return self.write_count
        return self.total_count


SUMMARY_COLUMNS = [f.name for f in fields(WorkloadSummary)]


@dataclass(frozen=True)
class SizeHistogram:
    """Request counts per size bucket; the last bucket is open-ended."""

    bounds: tuple
    counts: tuple

    @property
    def total(self) -> int:
        return sum(self.counts)

    def labels(self) -> list:
        labels = [f"<={b}" for b in self.bounds]
        labels.append(f">{self.bounds[-1]}" if self.bounds else "all")
        return labels


def footprint(workload: Workload) -> int:
    """Furthest byte touched by any request, used as the volume size."""
    if not len(workload):
        raise EmptyWorkload(f"Workload '{workload.volume_id}' has no records")
    return max(r.offset_bytes + r.length_bytes for r in workload.records)


def summarize(workload: Workload) -> WorkloadSummary:
    if not len(workload):
        raise EmptyWorkload(f"Workload '{workload.volume_id}' has no records")

    read_count = write_count = read_bytes = write_bytes = 0
    for record in workload.records:
        if record.direction is Direction.READ:
            read_count += 1
            read_bytes += record.length_bytes
        else:
            write_count += 1
            write_bytes += record.length_bytes

    return WorkloadSummary(
        volume_id=workload.volume_id,
        read_count=read_count,
        write_count=write_count,
        total_count=read_count + write_count,
        read_bytes=read_bytes,
        write_bytes=write_bytes,
        footprint_bytes=footprint(workload),
        first_ts_us=workload.first_ts_us,
        last_ts_us=workload.last_ts_us,
    )


def select_top_workloads(
    summaries: Sequence[WorkloadSummary],
    fraction: float,
    metric: Metric = Metric.READ_WRITE,
) -> list:
    """
    Smallest set of busiest volumes whose count strictly exceeds fraction of the total.

    Volumes are ranked by the metric descending, ties by volume id. When no prefix
    strictly exceeds the threshold (fraction 1.0, or an all-zero metric), every
    volume is returned in ranked order.
    """
    if not summaries:
        raise ValueError("No workload summaries to select from")
    if not 0 < fraction <= 1:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    metric = Metric(metric)

    ranked = sorted(summaries, key=lambda s: (-s.count(metric), s.volume_id))
    threshold = fraction * sum(s.count(metric) for s in ranked)

    selected = []
    cumulative = 0
    for summary in ranked:
        selected.append(summary.volume_id)
        cumulative += summary.count(metric)
        if cumulative > threshold:
            return selected
    return selected


def select_top_workloads_union(summaries: Sequence[WorkloadSummary], fraction: float) -> list:
    """Union of the read, write and read+write selections, busiest first."""
    chosen = set()
    for metric in Metric:
        chosen.update(select_top_workloads(summaries, fraction, metric))
    ranked = sorted(
        (s for s in summaries if s.volume_id in chosen),
        key=lambda s: (-s.total_count, s.volume_id),
    )
    return [s.volume_id for s in ranked]


def share_of_total(
    summaries: Iterable[WorkloadSummary],
    selected: Iterable[str],
    metric: Metric = Metric.READ_WRITE,
) -> float:
    """Fraction of all IO (by metric) carried by the selected volumes."""
    summaries = list(summaries)
    selected = set(selected)
    total = sum(s.count(metric) for s in summaries)
    if total == 0:
        return 0.0
    return sum(s.count(metric) for s in summaries if s.volume_id in selected) / total


def io_size_histogram(workload: Workload, bucket_bounds: Optional[Sequence[int]] = None) -> SizeHistogram:
    """Count requests into the first bucket whose bound is >= the request length."""
    bounds = tuple(DEFAULT_SIZE_BOUNDS if bucket_bounds is None else bucket_bounds)
    if any(a >= b for a, b in zip(bounds, bounds[1:])):
        raise ValueError(f"Bucket bounds must be strictly increasing: {list(bounds)}")

    counts = [0] * (len(bounds) + 1)
    for record in workload.records:
        for i, bound in enumerate(bounds):
            if record.length_bytes <= bound:
                counts[i] += 1
                break
        else:
            counts[-1] += 1
    return SizeHistogram(bounds=bounds, counts=tuple(counts))


def summaries_frame(summaries: Iterable[WorkloadSummary]) -> pd.DataFrame:
    """One row per workload, stable column order."""
    return pd.DataFrame([asdict(s) for s in summaries], columns=SUMMARY_COLUMNS)


def histograms_frame(histograms: dict) -> pd.DataFrame:
    """Long format: volume_id, bucket label, upper bound (empty for the tail), count."""
    rows = []
    for volume_id, histogram in histograms.items():
        uppers = list(histogram.bounds) + [None]
        for label, upper, count in zip(histogram.labels(), uppers, histogram.counts):
            rows.append({"volume_id": volume_id, "bucket": label, "upper_bytes": upper, "count": count})
    return pd.DataFrame(rows, columns=["volume_id", "bucket", "upper_bytes", "count"])
