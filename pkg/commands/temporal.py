"""
Temporal command: requests per interval and their five-number summaries.
"""

import functools

import pandas as pd
from rich.console import Console

from analysis import box_stats, classify_variability, coarsen, interval_counts
from commands.common import finish_outputs, job_count, load_workloads, start_outputs
from config import load_config
from display import display_temporal
from utils import parallel_map

console = Console()


def _series_for(workload, interval_s: int, factor: int):
    series = interval_counts(workload, interval_s)
    return coarsen(series, factor) if factor > 1 else series


def cmd_temporal(args):
    """Interval series CSV plus box statistics and variability per workload."""
    config = load_config()
    workloads, _, schema = load_workloads(args, config)

    with console.status("[bold green]Bucketing requests..."):
        series_list = parallel_map(
            functools.partial(_series_for, interval_s=args.interval, factor=args.coarsen),
            workloads.values(),
            job_count(args, config),
        )

    rows = []
    frames = []
    summary = {}
    for vid, series in zip(workloads, series_list):
        stats = box_stats(series.counts)
        variability = classify_variability(series, args.bursty_threshold)
        rows.append((vid, len(series), stats, variability))
        summary[vid] = {
            **stats.to_dict(),
            "intervals": len(series),
            "interval_s": series.interval_s,
            "origin_ts_us": series.origin_ts_us,
            "total": series.total,
            "variability": variability.value,
        }
        frames.append(pd.DataFrame({
            "volume_id": vid,
            "bucket_index": range(len(series)),
            "count": series.counts,
        }))

    outputs = start_outputs(args, "temporal", config, schema, args.traces)
    outputs.csv("interval_counts.csv", pd.concat(frames, ignore_index=True))
    outputs.json("box_stats.json", summary)
    finish_outputs(outputs)

    display_temporal(rows, args.interval * args.coarsen)
