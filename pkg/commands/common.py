"""
Shared plumbing for command handlers: trace loading, flags and output sets.
"""

import argparse
import logging
from pathlib import Path
from typing import Iterable, Optional

from rich.console import Console

from config import load_config, resolve_output_dir, resolve_schema_path
from errors import EmptyWorkload
from sources import ParseStats, TraceSchema, read_traces, split_by_volume
from utils import OutputSet, RunManifest, parse_count, parse_fraction

TOOL_VERSION = "0.1.0"

console = Console()
logger = logging.getLogger(__name__)


def add_output_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--output", "-o", help="Output directory (default: $TIERTRACE_OUTPUT_DIR, config, ./tiertrace-out)")


def add_trace_arguments(parser: argparse.ArgumentParser, jobs: bool = True):
    """Trace inputs, schema, malformed-line handling, output dir and workers."""
    parser.add_argument("traces", nargs="+", help="Trace files (.gz/.bz2/.xz are decompressed)")
    parser.add_argument("--schema", "-s", help="Schema file mapping trace columns (default: config or built-in)")
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--strict", dest="strict", action="store_true", default=None, help="Fail on the first malformed line")
    mode.add_argument("--lenient", dest="strict", action="store_false", help="Skip malformed lines (default)")
    add_output_arguments(parser)
    if jobs:
        parser.add_argument("--jobs", "-j", type=parse_count, help="Worker processes for per-workload analyses")


def fraction_arg(text: str) -> float:
    return parse_fraction(text)


def load_schema(args, config: dict) -> TraceSchema:
    path = resolve_schema_path(getattr(args, "schema", None), config)
    if path is None:
        return TraceSchema.default()
    logger.debug("Using schema %s", path)
    return TraceSchema.load(path)


def is_strict(args, config: dict) -> bool:
    if getattr(args, "strict", None) is not None:
        return args.strict
    return bool(config.get("strict", False))


def job_count(args, config: dict) -> int:
    jobs = getattr(args, "jobs", None)
    return max(1, jobs if jobs is not None else int(config.get("jobs", 1)))


def load_workloads(args, config: Optional[dict] = None):
    """Parse every trace file and split it per volume. Returns (workloads, stats, schema)."""
    config = load_config() if config is None else config
    schema = load_schema(args, config)
    stats = ParseStats()

    with console.status(f"[bold green]Parsing {len(args.traces)} trace file(s)..."):
        workloads = split_by_volume(read_traces(args.traces, schema, strict=is_strict(args, config), stats=stats))

    if stats.malformed:
        console.print(f"[yellow]Warning: skipped {stats.malformed} malformed line(s)[/yellow]")
    if not workloads:
        raise EmptyWorkload("No trace records were parsed")
    console.print(f"[dim]{stats.records} request(s) across {len(workloads)} workload(s)[/dim]")
    return workloads, stats, schema


def _jsonable(value):
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "value"):
        return value.value
    return value


def start_outputs(
    args,
    command: str,
    config: Optional[dict] = None,
    schema: Optional[TraceSchema] = None,
    inputs: Iterable = (),
) -> OutputSet:
    """Open <output_dir>/<command>/ and seed its manifest."""
    config = load_config() if config is None else config
    directory = resolve_output_dir(getattr(args, "output", None), config) / command
    parameters = {
        key: _jsonable(value)
        for key, value in sorted(vars(args).items())
        if key not in ("func", "argv", "command", "traces")
    }
    manifest = RunManifest(
        command=command,
        tool_version=TOOL_VERSION,
        argv=list(getattr(args, "argv", [])),
        parameters=parameters,
        schema=schema.to_dict() if schema else None,
    )
    manifest.add_inputs(inputs)
    return OutputSet(directory, manifest)


def finish_outputs(outputs: OutputSet):
    manifest_path = outputs.close()
    console.print(f"[green]✓ Wrote {len(outputs.manifest.outputs)} file(s) to {outputs.directory}[/green]")
    logger.debug("Manifest at %s", manifest_path)


def parse_stats_dict(stats: ParseStats) -> dict:
    return {
        "lines": stats.lines,
        "records": stats.records,
        "malformed": stats.malformed,
        "skipped": stats.skipped,
        "first_errors": [str(e) for e in stats.errors],
    }
