"""
Utility functions for tiertrace.
"""

from utils.units import (
    format_bytes,
    parse_count,
    parse_duration,
    parse_fraction,
    parse_fraction_list,
    parse_id_list,
    parse_rate,
    parse_size,
)
from utils.output import OutputSet, RunManifest, file_sha256, write_csv, write_json
from utils.log import setup_logging
from utils.parallel import parallel_map

__all__ = [
    "format_bytes",
    "parse_count",
    "parse_duration",
    "parse_fraction",
    "parse_fraction_list",
    "parse_id_list",
    "parse_rate",
    "parse_size",
    "OutputSet",
    "RunManifest",
    "file_sha256",
    "write_csv",
    "write_json",
    "setup_logging",
    "parallel_map",
]
