"""
Macroscopic IO concentration: per-slice macro page counts, concentrated pages,
run lengths and predictability.
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import pandas as pd

from errors import EmptySlice, EmptyWorkload, NoActivity
from sources.trace import Workload

GIB = 1 << 30
DEFAULT_INTERVAL_S = 15
DEFAULT_THRESHOLD = 0.05
US_PER_S = 1_000_000


@dataclass(frozen=True)
class SliceCounts:
    slice_index: int
    counts: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def is_empty(self) -> bool:
        return not self.counts

    def ranked(self) -> list:
        """(page, count) pairs by count descending, page id ascending."""
        return sorted(self.counts.items(), key=lambda item: (-item[1], item[0]))


@dataclass(frozen=True)
class ConcentratedSet:
    slice_index: int
    pages: tuple
    covered_count: int
    total_count: int


@dataclass(frozen=True)
class PagePredictability:
    macro_page_id: int
    concentration_judgments: int
    judgment_ratio: float
    unpredictable: bool


def slice_page_counts(
    workload: Workload,
    macro_page_bytes: int = GIB,
    interval_s: int = DEFAULT_INTERVAL_S,
) -> list:
    """
    Access counts per macro page for every slice from the workload origin.

    A request counts toward the macro page holding its starting offset.
    Slices without requests are kept as empty SliceCounts.
    """
    if not len(workload):
        raise EmptyWorkload(f"Workload '{workload.volume_id}' has no records")
    if macro_page_bytes < 1 or interval_s < 1:
        raise ValueError("macro_page_bytes and interval_s must be positive")

    origin = workload.first_ts_us
    interval_us = interval_s * US_PER_S
    per_slice = {}
    for record in workload.records:
        index = (record.timestamp_us - origin) // interval_us
        per_slice.setdefault(index, Counter())[record.offset_bytes // macro_page_bytes] += 1

    last = max(per_slice)
    return [SliceCounts(i, dict(per_slice.get(i, {}))) for i in range(last + 1)]


def top_page_share_profile(slices: Sequence[SliceCounts], k: int) -> list:
    """
    Average share of the rank-r page over non-empty slices, for r = 1..k.

    Slices with fewer than r pages contribute 0 at rank r.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    active = [s for s in slices if not s.is_empty]
    if not active:
        raise NoActivity("No slice contains any access")

    sums = [0.0] * k
    for s in active:
        total = s.total
        for rank, (_, count) in enumerate(s.ranked()[:k]):
            sums[rank] += count / total
    return [value / len(active) for value in sums]


def top_k_coverage(profile: Sequence[float], k: int = 10) -> float:
    """Average share of IO captured by the top-k pages."""
    return float(sum(profile[:k]))


def concentrated_pages(slice_counts: SliceCounts) -> ConcentratedSet:
    """Smallest busiest-first page prefix whose accesses strictly exceed half the slice."""
    if slice_counts.is_empty:
        raise EmptySlice(f"Slice {slice_counts.slice_index} has no accesses")

    total = slice_counts.total
    pages = []
    covered = 0
    for page, count in slice_counts.ranked():
        pages.append(page)
        covered += count
        if 2 * covered > total:
            break
    return ConcentratedSet(slice_counts.slice_index, tuple(pages), covered, total)


def concentration_judgments(slices: Iterable[SliceCounts]) -> dict:
    """macro page id -> sorted slice indices where the page was concentrated."""
    judged = {}
    for s in slices:
        if s.is_empty:
            continue
        for page in concentrated_pages(s).pages:
            judged.setdefault(page, []).append(s.slice_index)
    return {page: sorted(indices) for page, indices in sorted(judged.items())}


def _runs(indices: Sequence[int]) -> list:
    runs = []
    length = 0
    previous = None
    for index in indices:
        if previous is not None and index == previous + 1:
            length += 1
        else:
            if length:
                runs.append(length)
            length = 1
        previous = index
    if length:
        runs.append(length)
    return runs


def concentration_run_lengths(slices: Iterable[SliceCounts]) -> dict:
    """macro page id -> lengths (in slices) of its maximal concentrated runs."""
    return {page: _runs(indices) for page, indices in concentration_judgments(slices).items()}


def pooled_run_lengths(runs: dict) -> list:
    """All run lengths of a workload in one ascending list."""
    return sorted(length for lengths in runs.values() for length in lengths)


def classify_predictability(
    slices: Sequence[SliceCounts],
    threshold: float = DEFAULT_THRESHOLD,
    include_empty_slices: bool = True,
) -> list:
    """
    Judgment ratio per concentrated page; pages below threshold are unpredictable.

    The denominator is every slice of the observation window, or only the
    non-empty ones when include_empty_slices is False.
    """
    if not slices:
        raise ValueError("At least one slice is required")
    denominator = len(slices) if include_empty_slices else sum(1 for s in slices if not s.is_empty)
    if denominator == 0:
        raise NoActivity("No slice contains any access")

    result = []
    for page, indices in concentration_judgments(slices).items():
        ratio = len(indices) / denominator
        result.append(PagePredictability(page, len(indices), ratio, ratio < threshold))
    return result


def unpredictable_fraction(predictabilities: Sequence[PagePredictability]) -> float:
    """Share of concentrated pages judged unpredictable."""
    if not predictabilities:
        return 0.0
    return sum(1 for p in predictabilities if p.unpredictable) / len(predictabilities)


def slices_frame(slices: Iterable[SliceCounts]) -> pd.DataFrame:
    rows = [
        {"slice": s.slice_index, "page": page, "count": count}
        for s in slices
        for page, count in sorted(s.counts.items())
    ]
    return pd.DataFrame(rows, columns=["slice", "page", "count"])
