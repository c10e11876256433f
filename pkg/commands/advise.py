"""
Advise command: combine admission and cache curves into per-workload advice.
"""

import functools

from rich.console import Console

from analysis import summarize
from commands.common import finish_outputs, job_count, load_workloads, start_outputs
from config import load_config
from display import display_advice
from sim.advisor import advice_frame, advise
from sim.cache import compare_algorithms, comparisons_frame
from utils import parallel_map

console = Console()


def cmd_advise(args):
    """Tier-1 eligibility plus cache keep/bypass advice per workload."""
    config = load_config()
    workloads, _, schema = load_workloads(args, config)
    jobs = job_count(args, config)

    with console.status("[bold green]Comparing LRU and ARC..."):
        summaries = parallel_map(summarize, workloads.values(), jobs)
        results = parallel_map(
            functools.partial(compare_algorithms, size_fractions=args.fractions, page_size_bytes=args.page_size),
            workloads.values(),
            jobs,
        )
    comparisons = dict(zip(workloads, results))

    advice = advise(summaries, comparisons, args.fraction, args.low_threshold, args.epsilon, args.critical)

    outputs = start_outputs(args, "advise", config, schema, args.traces)
    outputs.csv("advice.csv", advice_frame(advice))
    outputs.csv("algorithm_comparison.csv", comparisons_frame(comparisons))
    finish_outputs(outputs)

    display_advice(advice)
