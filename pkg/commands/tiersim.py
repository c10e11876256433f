"""
Tiering command: replay workloads through one or more placement policies.
"""

from rich.console import Console

from analysis import summarize
from commands.common import finish_outputs, load_workloads, start_outputs
from config import load_config
from display import display_tiering
from errors import CapacityInfeasible
from sim.tiering import (
    CapacityMode,
    MonitorConfig,
    PlacementPolicy,
    TierConfig,
    admission_filter,
    intervals_frame,
    simulate_tiering,
)

console = Console()

POLICY_CHOICES = [p.value for p in PlacementPolicy] + ["all"]


def build_tier_config(args) -> TierConfig:
    return TierConfig(
        tier1_capacity_bytes=args.tier1_capacity,
        tier1_latency_us=args.tier1_latency,
        tier2_latency_us=args.tier2_latency,
        tier1_write_latency_us=args.tier1_write_latency,
        tier2_write_latency_us=args.tier2_write_latency,
        migration_bandwidth_bytes_per_s=args.bandwidth,
        decision_interval_s=args.interval,
        promotion_unit_bytes=args.unit,
        capacity_mode=CapacityMode.BEST_EFFORT if args.best_effort else CapacityMode.STRICT,
    )


def cmd_tiersim(args):
    """Per-policy JSON report and per-interval latency series."""
    config = load_config()
    workloads, _, schema = load_workloads(args, config)
    tier_config = build_tier_config(args)
    monitor = MonitorConfig(
        cache_fraction=args.cache_fraction,
        algorithm=args.cache_algo,
        page_size_bytes=args.page_size,
        low_threshold=args.low_threshold,
        consecutive_n=args.consecutive,
    )

    eligible = None
    if args.admission_fraction is not None:
        eligible = admission_filter([summarize(w) for w in workloads.values()], args.admission_fraction)
        console.print(f"[dim]{len(eligible)} of {len(workloads)} workload(s) admitted to the first tier[/dim]")

    policies = list(PlacementPolicy) if args.policy == "all" else [PlacementPolicy(args.policy)]
    reports = []
    skipped = {}
    for policy in policies:
        with console.status(f"[bold green]Simulating {policy.value}..."):
            try:
                report = simulate_tiering(
                    workloads.values(),
                    tier_config,
                    policy,
                    eligible=None if policy is PlacementPolicy.ALL_SECOND else eligible,
                    performance_critical=args.critical,
                    monitor=monitor,
                )
            except CapacityInfeasible as e:
                if len(policies) == 1:
                    raise
                console.print(f"[yellow]Warning: {policy.value} skipped: {e}[/yellow]")
                skipped[policy.value] = str(e)
                continue
        reports.append(report)

    outputs = start_outputs(args, "tiersim", config, schema, args.traces)
    for report in reports:
        outputs.json(f"tiersim_{report.policy.value}.json", {**report.to_dict(), "monitor": monitor.to_dict()})
        outputs.csv(f"intervals_{report.policy.value}.csv", intervals_frame(report))
    if skipped:
        outputs.json("skipped.json", skipped)
    finish_outputs(outputs)

    display_tiering(reports)
