"""
Stats command: per-workload aggregates and the high-traffic subset.
"""

from rich.console import Console

from analysis import Metric, io_size_histogram, select_top_workloads, select_top_workloads_union, share_of_total, summarize
from analysis.workload_stats import histograms_frame, summaries_frame
from commands.common import finish_outputs, job_count, load_workloads, parse_stats_dict, start_outputs
from config import load_config
from display import display_stats
from utils import parallel_map

console = Console()


def cmd_stats(args):
    """Summaries CSV, IO size histograms and the top-workload selection."""
    config = load_config()
    workloads, stats, schema = load_workloads(args, config)
    jobs = job_count(args, config)

    with console.status("[bold green]Summarizing workloads..."):
        summaries = parallel_map(summarize, workloads.values(), jobs)
        bounds = args.size_bounds
        histograms = {vid: io_size_histogram(w, bounds) for vid, w in workloads.items()}

    metric = Metric(args.metric)
    if args.union:
        selected = select_top_workloads_union(summaries, args.fraction)
    else:
        selected = select_top_workloads(summaries, args.fraction, metric)
    share = share_of_total(summaries, selected, metric)

    outputs = start_outputs(args, "stats", config, schema, args.traces)
    outputs.csv("summaries.csv", summaries_frame(summaries))
    outputs.csv("size_histograms.csv", histograms_frame(histograms))
    outputs.text("top_workloads.txt", "".join(f"{vid}\n" for vid in selected))
    outputs.json("selection.json", {
        "fraction": args.fraction,
        "metric": metric.value,
        "union": args.union,
        "selected": selected,
        "share_of_total": share,
        "workloads": len(summaries),
        "parse": parse_stats_dict(stats),
    })
    finish_outputs(outputs)

    display_stats(summaries, selected, share, metric.value, args.fraction)
