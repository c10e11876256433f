"""
Workload analyses: aggregate statistics, temporal locality and IO concentration.
"""

from analysis.workload_stats import (
    Metric,
    SizeHistogram,
    WorkloadSummary,
    footprint,
    io_size_histogram,
    select_top_workloads,
    select_top_workloads_union,
    share_of_total,
    summarize,
)
from analysis.temporal import (
    BoxStats,
    IntervalSeries,
    Variability,
    box_stats,
    classify_variability,
    coarsen,
    interval_counts,
)
from analysis.concentration import (
    ConcentratedSet,
    PagePredictability,
    SliceCounts,
    classify_predictability,
    concentrated_pages,
    concentration_run_lengths,
    pooled_run_lengths,
    slice_page_counts,
    slices_frame,
    top_k_coverage,
    top_page_share_profile,
    unpredictable_fraction,
)

__all__ = [
    "Metric",
    "SizeHistogram",
    "WorkloadSummary",
    "footprint",
    "io_size_histogram",
    "select_top_workloads",
    "select_top_workloads_union",
    "share_of_total",
    "summarize",
    "BoxStats",
    "IntervalSeries",
    "Variability",
    "box_stats",
    "classify_variability",
    "coarsen",
    "interval_counts",
    "ConcentratedSet",
    "PagePredictability",
    "SliceCounts",
    "classify_predictability",
    "concentrated_pages",
    "concentration_run_lengths",
    "pooled_run_lengths",
    "slice_page_counts",
    "slices_frame",
    "top_k_coverage",
    "top_page_share_profile",
    "unpredictable_fraction",
]
