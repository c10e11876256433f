"""
Trace sources for tiertrace: text trace files and synthetic workloads.
"""

from sources.schema import TraceSchema
from sources.trace import (
    Direction,
    ParseStats,
    TraceRecord,
    Workload,
    open_trace,
    parse_trace,
    read_traces,
    split_by_volume,
    write_trace,
)
from sources.synth import Movement, SynthSpec, generate

__all__ = [
    "TraceSchema",
    "Direction",
    "ParseStats",
    "TraceRecord",
    "Workload",
    "open_trace",
    "parse_trace",
    "read_traces",
    "split_by_volume",
    "write_trace",
    "Movement",
    "SynthSpec",
    "generate",
]
