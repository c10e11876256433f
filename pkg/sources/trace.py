"""
Block IO trace records, the streaming parser and per-volume splitting.
"""

import bz2
import gzip
import io
import logging
import lzma
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Optional, TextIO, Union

from errors import MalformedLine, TraceFileError
from sources.schema import TraceSchema

logger = logging.getLogger(__name__)

U64_LIMIT = 1 << 64
INTEGER_RE = re.compile(r"^[+-]?[0-9]+$")

# Malformed lines beyond this many are only logged at DEBUG
MAX_LOGGED_MALFORMED = 10


class Direction(str, Enum):
    READ = "R"
    WRITE = "W"


class TraceRecord(NamedTuple):
    """One block IO request."""

    timestamp_us: int
    volume_id: str
    direction: Direction
    offset_bytes: int
    length_bytes: int

    @property
    def end_bytes(self) -> int:
        return self.offset_bytes + self.length_bytes


@dataclass
class Workload:
    """The time-ordered requests of one volume."""

    volume_id: str
    records: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[TraceRecord]:
        return iter(self.records)

    @property
    def first_ts_us(self) -> int:
        return self.records[0].timestamp_us

    @property
    def last_ts_us(self) -> int:
        return self.records[-1].timestamp_us

    @classmethod
    def from_records(cls, volume_id: str, records: Iterable[TraceRecord]) -> "Workload":
        """Build a workload, stable-sorting by timestamp when the input is out of order."""
        records = list(records)
        for record in records:
            if record.volume_id != volume_id:
                raise ValueError(f"Record for volume '{record.volume_id}' in workload '{volume_id}'")
        if any(a.timestamp_us > b.timestamp_us for a, b in zip(records, records[1:])):
            records.sort(key=lambda r: r.timestamp_us)
        return cls(volume_id=volume_id, records=records)


@dataclass
class ParseStats:
    """Counters from one parsing pass."""

    lines: int = 0
    records: int = 0
    malformed: int = 0
    skipped: int = 0
    errors: list = field(default_factory=list)

    def merge(self, other: "ParseStats"):
        self.lines += other.lines
        self.records += other.records
        self.malformed += other.malformed
        self.skipped += other.skipped
        self.errors.extend(other.errors)


def open_trace(path: Union[str, Path]) -> TextIO:
    """Open a trace file as text, decompressing .gz/.bz2/.xz by suffix."""
    path = Path(path)
    if not path.is_file():
        raise TraceFileError(f"Trace file not found: {path}")

    openers = {".gz": gzip.open, ".bz2": bz2.open, ".xz": lzma.open}
    opener = openers.get(path.suffix.lower())
    try:
        if opener:
            return opener(path, "rt", encoding="utf-8", newline="")
        return open(path, "r", encoding="utf-8", newline="")
    except OSError as e:
        raise TraceFileError(f"Cannot read trace file {path}: {e}")


def _parse_int(token: str, scale: int) -> int:
    """Parse an integral field such as an offset or a length."""
    token = token.strip()
    if not INTEGER_RE.match(token):
        raise ValueError(token)
    return int(token) * scale


def _parse_timestamp(token: str, scale: int) -> int:
    """Parse a timestamp, accepting decimal fractions of the schema's unit."""
    token = token.strip()
    if INTEGER_RE.match(token):
        return int(token) * scale
    value = float(token) * scale
    if value != value or value in (float("inf"), float("-inf")):
        raise ValueError(token)
    return int(round(value))


def parse_line(line: str, schema: TraceSchema, directions: Optional[dict] = None) -> TraceRecord:
    """Parse one data line. Raises ValueError with a reason on malformed input."""
    parts = line.split(schema.delimiter) if schema.delimiter is not None else line.split()
    if len(parts) < schema.min_fields:
        raise ValueError(f"expected at least {schema.min_fields} fields, got {len(parts)}")

    cols = schema.columns
    directions = directions or schema.direction_lookup()

    try:
        timestamp_us = _parse_timestamp(parts[cols["timestamp"]], schema.timestamp_scale)
    except ValueError:
        raise ValueError(f"non-numeric timestamp '{parts[cols['timestamp']].strip()}'")
    try:
        offset = _parse_int(parts[cols["offset"]], schema.offset_unit_bytes)
    except ValueError:
        raise ValueError(f"non-integral offset '{parts[cols['offset']].strip()}'")
    try:
        length = _parse_int(parts[cols["length"]], schema.length_unit_bytes)
    except ValueError:
        raise ValueError(f"non-integral length '{parts[cols['length']].strip()}'")

    token = parts[cols["direction"]].strip().upper()
    if token not in directions:
        raise ValueError(f"unknown direction token '{parts[cols['direction']].strip()}'")

    volume_id = parts[cols["volume_id"]].strip()
    if not volume_id:
        raise ValueError("empty volume id")
    if offset < 0:
        raise ValueError(f"negative offset {offset}")
    if length < 1:
        raise ValueError(f"length must be at least 1 byte, got {length}")
    if offset + length >= U64_LIMIT:
        raise ValueError("offset + length overflows 64 bits")

    return TraceRecord(timestamp_us, volume_id, Direction(directions[token]), offset, length)


def parse_trace(
    stream: Iterable[str],
    schema: Optional[TraceSchema] = None,
    strict: bool = False,
    stats: Optional[ParseStats] = None,
    source: str = "<stream>",
) -> Iterator[TraceRecord]:
    """
    Lazily parse a delimiter-separated trace.

    Malformed lines are counted and skipped, or raise MalformedLine when strict.
    Blank lines and lines starting with '#' are skipped silently.
    """
    schema = schema or TraceSchema.default()
    stats = stats if stats is not None else ParseStats()
    directions = schema.direction_lookup()
    header_pending = schema.has_header

    for line_no, raw in enumerate(stream, start=1):
        stats.lines += 1
        line = raw.rstrip("\r\n")
        if header_pending:
            header_pending = False
            stats.skipped += 1
            continue
        if not line.strip() or line.lstrip().startswith("#"):
            stats.skipped += 1
            continue

        try:
            record = parse_line(line, schema, directions)
        except ValueError as e:
            error = MalformedLine(line_no, str(e), source)
            if strict:
                raise error
            stats.malformed += 1
            if stats.malformed <= MAX_LOGGED_MALFORMED:
                stats.errors.append(error)
                logger.warning("Skipping malformed line %s", error)
            else:
                logger.debug("Skipping malformed line %s", error)
            continue

        stats.records += 1
        yield record

    if stats.malformed:
        logger.info("%s: skipped %d malformed line(s)", source, stats.malformed)


def read_traces(
    paths: Iterable[Union[str, Path]],
    schema: Optional[TraceSchema] = None,
    strict: bool = False,
    stats: Optional[ParseStats] = None,
) -> Iterator[TraceRecord]:
    """Parse several trace files one after another."""
    stats = stats if stats is not None else ParseStats()
    for path in paths:
        with open_trace(path) as stream:
            yield from parse_trace(stream, schema, strict=strict, stats=stats, source=str(path))


def split_by_volume(records: Iterable[TraceRecord]) -> dict:
    """Partition records into one Workload per volume id, in first-seen order."""
    grouped = {}
    for record in records:
        grouped.setdefault(record.volume_id, []).append(record)
    return {vid: Workload.from_records(vid, recs) for vid, recs in grouped.items()}


def _format_scaled(value: int, scale: int) -> str:
    if value % scale == 0:
        return str(value // scale)
    # Only timestamps reach here; keep microsecond precision
    whole, frac = divmod(value, scale)
    digits = len(str(scale)) - 1
    return f"{whole}.{frac:0{digits}d}".rstrip("0")


def format_record(record: TraceRecord, schema: TraceSchema) -> str:
    """Serialize one record as a line in the given schema (without newline)."""
    for unit, value in ((schema.offset_unit_bytes, record.offset_bytes), (schema.length_unit_bytes, record.length_bytes)):
        if value % unit:
            raise ValueError(f"{value} bytes is not a multiple of the schema unit {unit}")

    values = {
        "timestamp": _format_scaled(record.timestamp_us, schema.timestamp_scale),
        "volume_id": record.volume_id,
        "direction": schema.read_tokens[0] if record.direction is Direction.READ else schema.write_tokens[0],
        "offset": str(record.offset_bytes // schema.offset_unit_bytes),
        "length": str(record.length_bytes // schema.length_unit_bytes),
    }
    row = [""] * schema.min_fields
    for name, index in schema.columns.items():
        row[index] = values[name]
    delimiter = schema.delimiter if schema.delimiter is not None else " "
    return delimiter.join(row)


def write_trace(records: Iterable[TraceRecord], stream: TextIO, schema: Optional[TraceSchema] = None) -> int:
    """Write records in schema format. Returns the number of lines written."""
    schema = schema or TraceSchema.default()
    count = 0
    if schema.has_header:
        header = [""] * schema.min_fields
        for name, index in schema.columns.items():
            header[index] = name
        stream.write((schema.delimiter or " ").join(header) + "\n")
    for record in records:
        stream.write(format_record(record, schema) + "\n")
        count += 1
    return count


def records_to_text(records: Iterable[TraceRecord], schema: Optional[TraceSchema] = None) -> str:
    buffer = io.StringIO()
    write_trace(records, buffer, schema)
    return buffer.getvalue()
