"""
Rich console tables for tiertrace command results.
"""

from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from utils.units import format_bytes

console = Console()

MAX_ROWS = 20


def _header(title: str, subtitle: str = ""):
    console.print()
    console.print(Panel(f"[bold cyan]{title}[/bold cyan]", box=box.DOUBLE))
    if subtitle:
        console.print(f"[dim]{subtitle}[/dim]")
    console.print()


def _table(*columns) -> Table:
    table = Table(show_header=True, header_style="bold", box=box.ROUNDED)
    for name, style, justify in columns:
        table.add_column(name, style=style, justify=justify)
    return table


def _more(total: int):
    if total > MAX_ROWS:
        console.print(f"  [dim]... and {total - MAX_ROWS} more (see the CSV output)[/dim]")


def display_stats(summaries: list, selected: list, share: float, metric: str, fraction: float):
    """Busiest workloads and the selected high-traffic subset."""
    _header(
        "Workload Statistics",
        f"{len(selected)} of {len(summaries)} workload(s) carry {share:.1%} of {metric} IO (target > {fraction:.0%})",
    )
    chosen = set(selected)
    table = _table(
        ("Volume", "yellow", "left"),
        ("Reads", "cyan", "right"),
        ("Writes", "cyan", "right"),
        ("Total", "green", "right"),
        ("Footprint (GiB)", "white", "right"),
        ("Selected", "magenta", "center"),
    )
    ranked = sorted(summaries, key=lambda s: (-s.total_count, s.volume_id))
    for s in ranked[:MAX_ROWS]:
        table.add_row(
            s.volume_id,
            f"{s.read_count:,}",
            f"{s.write_count:,}",
            f"{s.total_count:,}",
            f"{s.footprint_gib:,.2f}",
            "✓" if s.volume_id in chosen else "",
        )
    console.print(table)
    _more(len(ranked))


def display_temporal(rows: list, interval_s: int):
    """rows: (volume_id, n_intervals, BoxStats, Variability)."""
    _header("Temporal Locality", f"Requests per {interval_s}-second interval")
    table = _table(
        ("Volume", "yellow", "left"),
        ("Intervals", "white", "right"),
        ("Min", "cyan", "right"),
        ("Q1", "cyan", "right"),
        ("Median", "green", "right"),
        ("Q3", "cyan", "right"),
        ("Max", "cyan", "right"),
        ("Variability", "magenta", "left"),
    )
    for vid, n, stats, variability in rows[:MAX_ROWS]:
        table.add_row(
            vid, str(n),
            f"{stats.min:g}", f"{stats.lower_quartile:g}", f"{stats.median:g}",
            f"{stats.upper_quartile:g}", f"{stats.max:g}",
            variability.value,
        )
    console.print(table)
    _more(len(rows))


def display_cache_curves(curves: list, convergence: dict):
    """Hit ratio per size fraction, one row per workload and algorithm."""
    if not curves:
        return
    fractions = curves[0].fractions
    _header("Cache Hit Ratios", "Cache size as a fraction of each workload's footprint")
    columns = [("Volume", "yellow", "left"), ("Algorithm", "white", "left")]
    columns += [(f"{f:.0%}" if f >= 0.01 else f"{f:g}", "green", "right") for f in fractions]
    columns += [("Converges at", "magenta", "right"), ("Effect", "cyan", "left")]
    table = _table(*columns)
    for curve in curves[: MAX_ROWS * 2]:
        info = convergence.get(curve.volume_id, {}).get(curve.algorithm.value, {})
        point = info.get("convergence_fraction")
        table.add_row(
            curve.volume_id,
            curve.algorithm.value.upper(),
            *(f"{r:.1%}" for r in curve.hit_ratios),
            "none" if point is None else f"{point:g}",
            info.get("effect", ""),
        )
    console.print(table)
    _more(len(curves) // 2 or len(curves))


def display_concentration(rows: list, top_k: int, threshold: float):
    """rows: dicts from the concentration command."""
    _header(
        "IO Concentration",
        f"Top-{top_k} coverage and pages concentrated in under {threshold:.0%} of slices",
    )
    table = _table(
        ("Volume", "yellow", "left"),
        ("Slices", "white", "right"),
        ("Top-1 share", "green", "right"),
        (f"Top-{top_k} share", "green", "right"),
        ("Concentrated pages", "cyan", "right"),
        ("Unpredictable", "magenta", "right"),
        ("Max run", "cyan", "right"),
    )
    for row in rows[:MAX_ROWS]:
        table.add_row(
            row["volume_id"],
            str(row["slices"]),
            f"{row['top1_share']:.1%}",
            f"{row['top_k_coverage']:.1%}",
            str(row["concentrated_pages"]),
            f"{row['unpredictable_fraction']:.1%}",
            str(row["max_run_length"]),
        )
    console.print(table)
    _more(len(rows))


def display_tiering(reports: list):
    """One row per policy run (aggregate over workloads)."""
    _header("Tiering Simulation")
    table = _table(
        ("Policy", "yellow", "left"),
        ("Requests", "white", "right"),
        ("Tier-1 served", "green", "right"),
        ("Mean latency (us)", "cyan", "right"),
        ("Promotions", "white", "right"),
        ("Demotions", "white", "right"),
        ("Migrated", "white", "right"),
        ("Capacity mode", "magenta", "left"),
    )
    for report in reports:
        agg = report.aggregate
        table.add_row(
            report.policy.value,
            f"{agg.requests_served:,}",
            f"{agg.tier1_served_fraction:.1%}",
            f"{agg.mean_latency_us:.1f}",
            str(agg.promotions),
            str(agg.demotions),
            format_bytes(agg.bytes_migrated),
            report.capacity_mode_used,
        )
    console.print(table)
    for report in reports:
        for vid, decision in sorted(report.decisions.items()):
            console.print(
                f"  [dim]{report.policy.value}: {vid} -> {decision['decision']} after interval {decision['interval']}[/dim]"
            )


def display_synth(spec, count: int, path):
    _header("Synthetic Trace", str(path))
    table = _table(("Parameter", "cyan", "left"), ("Value", "white", "left"))
    for key, value in spec.to_dict().items():
        table.add_row(key, str(value))
    table.add_row("requests written", f"{count:,}")
    console.print(table)


def display_advice(advice: list):
    _header("Tiering Advice")
    table = _table(
        ("Volume", "yellow", "left"),
        ("Tier-1 eligible", "green", "center"),
        ("Cache action", "magenta", "left"),
        ("Algorithm", "white", "left"),
        ("Cache size", "cyan", "right"),
        ("Best hit ratio", "cyan", "right"),
    )
    for a in advice[:MAX_ROWS]:
        table.add_row(
            a.volume_id,
            "✓" if a.tier1_eligible else "",
            a.cache_action.value,
            a.algorithm.value.upper() if a.algorithm else "-",
            f"{a.cache_fraction:g}" if a.cache_fraction is not None else "-",
            f"{a.best_hit_ratio:.1%}",
        )
    console.print(table)
    _more(len(advice))


def display_config(config: dict, path, configured: bool):
    _header("tiertrace Configuration", str(path))
    if not configured:
        console.print("[yellow]No configuration saved yet. Run 'tiertrace setup' to create one.[/yellow]")
        return
    table = _table(("Setting", "cyan", "left"), ("Value", "white", "left"))
    for key in ("output_dir", "schema", "jobs", "strict"):
        table.add_row(key, str(config[key]) if key in config else "[dim]default[/dim]")
    console.print(table)
