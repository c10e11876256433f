#!/usr/bin/env python3
"""
tiertrace - block IO trace analysis and two-tier storage simulation.

Reads per-volume block traces and reports:
- IO bias across workloads and the high-traffic subset
- temporal locality per interval
- LRU/ARC cache hit ratio curves
- macro-page IO concentration and its predictability

and replays workloads through first/second tier placement policies.
"""

import argparse
import sys

from rich.console import Console

from commands import (
    cmd_advise,
    cmd_cachesim,
    cmd_concentration,
    cmd_setup,
    cmd_stats,
    cmd_synth,
    cmd_temporal,
    cmd_tiersim,
)
from commands.common import TOOL_VERSION, add_output_arguments, add_trace_arguments, fraction_arg
from commands.tiersim import POLICY_CHOICES
from errors import EXIT_USAGE, TierTraceError
from sim.cache import DEFAULT_EPSILON_PP, LOW_HIT_THRESHOLD
from utils import parse_count, parse_duration, parse_fraction_list, parse_id_list, parse_rate, parse_size, setup_logging

console = Console()

DEFAULT_FRACTIONS = "0.01,0.05,0.10"


def size_bounds_arg(text: str) -> list:
    return [parse_size(part) for part in text.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tiertrace",
        description="tiertrace - Analyze block IO traces and simulate two-tier storage placement",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  tiertrace stats trace.csv                      Per-volume counts, top workloads carrying > 50% of IO
  tiertrace stats trace.csv --metric read        Select by read count instead
  tiertrace temporal trace.csv --interval 15     Requests per 15-second interval, box statistics
  tiertrace cachesim trace.csv --algo arc        ARC hit ratios at 1%, 5%, 10% of the footprint
  tiertrace concentration trace.csv              1-GiB page concentration per 15-second slice
  tiertrace tiersim trace.csv --policy dynamic --tier1-capacity 4GiB
  tiertrace synth spec.json                      Write a synthetic trace
  tiertrace advise trace.csv --critical vol1     Per-workload tier and cache advice
  tiertrace setup                                Configure output directory and schema
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {TOOL_VERSION}")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")

    subparsers = parser.add_subparsers(dest="command")

    # Setup command
    setup_parser = subparsers.add_parser("setup", help="Configure output directory, schema and run options")
    setup_parser.add_argument("--show", action="store_true", help="Print the saved configuration and exit")
    setup_parser.add_argument("--output-dir", dest="output_dir", help="Save the default output directory")
    setup_parser.add_argument("--schema", "-s", help="Save the default trace schema file")
    setup_parser.add_argument("--jobs", "-j", type=parse_count, help="Save the default worker count")
    parsing = setup_parser.add_mutually_exclusive_group()
    parsing.add_argument("--strict", dest="strict", action="store_true", default=None, help="Save strict parsing as the default")
    parsing.add_argument("--lenient", dest="strict", action="store_false", help="Save lenient parsing as the default")
    setup_parser.set_defaults(func=cmd_setup)

    # Stats command
    stats_parser = subparsers.add_parser("stats", help="Per-workload statistics and the high-traffic subset")
    add_trace_arguments(stats_parser)
    stats_parser.add_argument("--fraction", "-f", type=fraction_arg, default=0.5, help="IO share the subset must exceed (default: 0.5)")
    stats_parser.add_argument("--metric", "-m", choices=["read", "write", "readwrite"], default="readwrite", help="Count to rank by (default: readwrite)")
    stats_parser.add_argument("--union", action="store_true", help="Union of the read, write and readwrite selections")
    stats_parser.add_argument("--size-bounds", type=size_bounds_arg, help="IO size bucket bounds (default: 4KiB,8KiB,16KiB,32KiB,64KiB)")
    stats_parser.set_defaults(func=cmd_stats)

    # Temporal command
    temporal_parser = subparsers.add_parser("temporal", help="Requests per interval and box statistics")
    add_trace_arguments(temporal_parser)
    temporal_parser.add_argument("--interval", "-i", type=parse_duration, default=15, help="Interval length (default: 15s)")
    temporal_parser.add_argument("--coarsen", type=parse_count, default=1, help="Sum this many adjacent intervals (default: 1)")
    temporal_parser.add_argument("--bursty-threshold", type=float, default=1.0, help="IQR/median above which a workload is bursty (default: 1.0)")
    temporal_parser.set_defaults(func=cmd_temporal)

    # Cache simulation command
    cache_parser = subparsers.add_parser("cachesim", help="LRU/ARC hit ratio curves and convergence sizes")
    add_trace_arguments(cache_parser)
    cache_parser.add_argument("--algo", "-a", choices=["lru", "arc", "both"], default="both", help="Replacement algorithm (default: both)")
    cache_parser.add_argument("--fractions", type=parse_fraction_list, default=parse_fraction_list(DEFAULT_FRACTIONS), help=f"Cache sizes as footprint fractions (default: {DEFAULT_FRACTIONS})")
    cache_parser.add_argument("--page-size", type=parse_size, default=4096, help="Cache page size (default: 4KiB)")
    cache_parser.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON_PP, help="Convergence tolerance in percentage points (default: 2)")
    cache_parser.add_argument("--low-threshold", type=float, default=LOW_HIT_THRESHOLD, help="Hit ratio below which a curve is low (default: 0.20)")
    cache_parser.set_defaults(func=cmd_cachesim)

    # Concentration command
    conc_parser = subparsers.add_parser("concentration", help="Macro-page IO concentration and predictability")
    add_trace_arguments(conc_parser)
    conc_parser.add_argument("--macro-page", type=parse_size, default=1 << 30, help="Macro page size (default: 1GiB)")
    conc_parser.add_argument("--interval", "-i", type=parse_duration, default=15, help="Slice length (default: 15s)")
    conc_parser.add_argument("--threshold", type=float, default=0.05, help="Judgment ratio below which a page is unpredictable (default: 0.05)")
    conc_parser.add_argument("--top-k", type=parse_count, default=10, help="Ranks in the top-page share profile (default: 10)")
    slices = conc_parser.add_mutually_exclusive_group()
    slices.add_argument("--include-empty", dest="include_empty", action="store_true", default=True, help="Count empty slices in the judgment ratio (default)")
    slices.add_argument("--active-only", dest="include_empty", action="store_false", help="Count only slices with IO")
    conc_parser.set_defaults(func=cmd_concentration)

    # Tiering simulation command
    tier_parser = subparsers.add_parser("tiersim", help="Replay workloads through tier placement policies")
    add_trace_arguments(tier_parser, jobs=False)
    tier_parser.add_argument("--policy", "-p", choices=POLICY_CHOICES, default="all", help="Placement policy (default: all)")
    tier_parser.add_argument("--tier1-capacity", type=parse_size, required=True, help="First tier capacity, e.g. 4GiB")
    tier_parser.add_argument("--tier1-latency", type=float, default=100.0, help="First tier latency in us (default: 100)")
    tier_parser.add_argument("--tier2-latency", type=float, default=5000.0, help="Second tier latency in us (default: 5000)")
    tier_parser.add_argument("--tier1-write-latency", type=float, help="First tier write latency in us (default: read latency)")
    tier_parser.add_argument("--tier2-write-latency", type=float, help="Second tier write latency in us (default: read latency)")
    tier_parser.add_argument("--bandwidth", type=parse_rate, default=float(256 << 20), help="Migration bandwidth, e.g. 256MiB/s (default)")
    tier_parser.add_argument("--interval", "-i", type=parse_duration, default=15, help="Decision interval (default: 15s)")
    tier_parser.add_argument("--unit", type=parse_size, default=1 << 30, help="Promotion unit (default: 1GiB)")
    capacity = tier_parser.add_mutually_exclusive_group()
    capacity.add_argument("--strict-capacity", dest="best_effort", action="store_false", default=False, help="Reject placements that do not fit (default)")
    capacity.add_argument("--best-effort", dest="best_effort", action="store_true", help="Pin the hottest regions that fit")
    tier_parser.add_argument("--admission-fraction", type=fraction_arg, help="Only volumes in the top subset for this IO share get first-tier space")
    tier_parser.add_argument("--critical", type=parse_id_list, default=set(), help="Comma-separated performance-critical volume ids")
    tier_parser.add_argument("--cache-fraction", type=fraction_arg, default=0.05, help="Monitored cache size as footprint fraction (default: 0.05)")
    tier_parser.add_argument("--cache-algo", choices=["lru", "arc"], default="arc", help="Monitored cache algorithm (default: arc)")
    tier_parser.add_argument("--page-size", type=parse_size, default=4096, help="Monitored cache page size (default: 4KiB)")
    tier_parser.add_argument("--low-threshold", type=float, default=LOW_HIT_THRESHOLD, help="Bypass below this hit ratio (default: 0.20)")
    tier_parser.add_argument("--consecutive", type=parse_count, default=3, help="Low intervals in a row before bypassing (default: 3)")
    tier_parser.set_defaults(func=cmd_tiersim)

    # Synth command
    synth_parser = subparsers.add_parser("synth", help="Generate a synthetic trace from a JSON spec")
    synth_parser.add_argument("spec", help="JSON spec file")
    synth_parser.add_argument("--seed", type=int, help="Override the spec's seed")
    synth_parser.add_argument("--schema", "-s", help="Schema to write the trace in (default: config or built-in)")
    synth_parser.add_argument("--name", help="Trace file name (default: <volume_id>.trace)")
    add_output_arguments(synth_parser)
    synth_parser.set_defaults(func=cmd_synth)

    # Advise command
    advise_parser = subparsers.add_parser("advise", help="Per-workload first-tier and cache advice")
    add_trace_arguments(advise_parser)
    advise_parser.add_argument("--fraction", "-f", type=fraction_arg, default=0.5, help="Admission IO share (default: 0.5)")
    advise_parser.add_argument("--fractions", type=parse_fraction_list, default=parse_fraction_list(DEFAULT_FRACTIONS), help=f"Cache sizes as footprint fractions (default: {DEFAULT_FRACTIONS})")
    advise_parser.add_argument("--page-size", type=parse_size, default=4096, help="Cache page size (default: 4KiB)")
    advise_parser.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON_PP, help="Convergence tolerance in percentage points (default: 2)")
    advise_parser.add_argument("--low-threshold", type=float, default=LOW_HIT_THRESHOLD, help="Bypass below this hit ratio (default: 0.20)")
    advise_parser.add_argument("--critical", type=parse_id_list, default=set(), help="Comma-separated performance-critical volume ids")
    advise_parser.set_defaults(func=cmd_advise)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = list(sys.argv[1:] if argv is None else argv)

    setup_logging(args.verbose)

    if not args.command:
        parser.print_help()
        sys.exit(EXIT_USAGE)

    try:
        args.func(args)
    except TierTraceError as e:
        console.print(f"[red]Error: {e}[/red]")
        sys.exit(e.exit_code)
    except ValueError as e:
        console.print(f"[red]Error: {e}[/red]")
        sys.exit(EXIT_USAGE)


if __name__ == "__main__":
    main()
