"""
Cache simulation command: hit ratio curves, convergence sizes and LRU vs ARC.
"""

import functools

from rich.console import Console

from commands.common import finish_outputs, job_count, load_workloads, start_outputs
from config import load_config
from display import display_cache_curves
from sim.cache import (
    Algorithm,
    classify_cache_effect,
    compare_curves,
    comparisons_frame,
    convergence_point,
    curves_frame,
    hit_ratio_curve,
)
from utils import parallel_map

console = Console()

ALGORITHM_CHOICES = ("lru", "arc", "both")


def _curves_for(workload, algorithms, fractions, page_size):
    return [hit_ratio_curve(workload, algorithm, fractions, page_size) for algorithm in algorithms]


def cmd_cachesim(args):
    """Replay every workload through LRU and/or ARC at each cache size."""
    config = load_config()
    workloads, _, schema = load_workloads(args, config)
    algorithms = [Algorithm.LRU, Algorithm.ARC] if args.algo == "both" else [Algorithm(args.algo)]

    with console.status(f"[bold green]Simulating {len(workloads)} workload(s)..."):
        per_workload = parallel_map(
            functools.partial(_curves_for, algorithms=algorithms, fractions=args.fractions, page_size=args.page_size),
            workloads.values(),
            job_count(args, config),
        )

    curves = [curve for group in per_workload for curve in group]
    convergence = {}
    for curve in curves:
        point = convergence_point(curve, args.epsilon) if len(curve.points) > 1 else None
        convergence.setdefault(curve.volume_id, {})[curve.algorithm.value] = {
            "convergence_fraction": point,
            "effect": classify_cache_effect(curve, args.low_threshold, args.epsilon).value,
        }

    outputs = start_outputs(args, "cachesim", config, schema, args.traces)
    outputs.csv("hit_ratio_curves.csv", curves_frame(curves))
    outputs.json("convergence.json", convergence)
    if args.algo == "both":
        comparisons = {group[0].volume_id: compare_curves(*group) for group in per_workload}
        outputs.csv("algorithm_comparison.csv", comparisons_frame(comparisons))
    finish_outputs(outputs)

    display_cache_curves(curves, convergence)
