"""
Deterministic synthetic block traces with a known hot region.

Request i of N = duration_s * request_rate is issued at
start_ts_us + floor(i * 1e6 / request_rate), so every slice holds exactly
interval_s * request_rate requests. Random draws come from SplitMix64(seed)
in this order:

1. For movement 'random' only: one randbelow(n_pages) per dwell period, up front.
2. Per request: random() < hot_share decides hot vs background;
   background requests draw randbelow(n_pages - 1) and skip the hot page;
   two-point sizes draw random() < weight of the first size;
   randbelow(slots) picks a 4-KiB aligned offset inside the page;
   random() < read_ratio picks Read, otherwise Write.
"""

import json
import logging
from dataclasses import asdict, dataclass, fields
from enum import Enum
from pathlib import Path
from typing import Optional, Union

from errors import InvalidSpec
from sources.prng import SplitMix64
from sources.trace import Direction, TraceRecord, Workload

logger = logging.getLogger(__name__)

GIB = 1 << 30
ALIGN_BYTES = 4096


class Movement(str, Enum):
    FIXED = "fixed"
    STEP = "step"
    RANDOM = "random"


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of one synthetic workload."""

    seed: int = 0
    duration_s: int = 600
    request_rate: int = 10
    footprint_bytes: int = 8 * GIB
    hot_page: int = 0
    hot_share: float = 0.9
    dwell_slices: int = 1
    movement: Movement = Movement.FIXED
    # Pages cycled by the 'step' rule, starting at hot_page; None means every page from hot_page on
    span: Optional[int] = None
    # (size_bytes, weight) pairs, one or two of them
    io_sizes: tuple = ((4096, 1.0),)
    read_ratio: float = 0.7
    volume_id: str = "synth0"
    interval_s: int = 15
    macro_page_bytes: int = GIB
    start_ts_us: int = 0

    def __post_init__(self):
        object.__setattr__(self, "movement", Movement(self.movement))
        object.__setattr__(self, "io_sizes", _normalize_sizes(self.io_sizes))
        self.validate()

    @property
    def n_pages(self) -> int:
        return -(-self.footprint_bytes // self.macro_page_bytes)

    @property
    def total_requests(self) -> int:
        return self.duration_s * self.request_rate

    @property
    def n_slices(self) -> int:
        return -(-self.duration_s // self.interval_s)

    @property
    def effective_span(self) -> int:
        return self.span if self.span is not None else self.n_pages - self.hot_page

    def validate(self):
        if not 0 < self.hot_share <= 1:
            raise InvalidSpec(f"hot_share must be in (0, 1], got {self.hot_share}")
        if self.request_rate < 1:
            raise InvalidSpec(f"request_rate must be at least 1, got {self.request_rate}")
        if self.duration_s < 1:
            raise InvalidSpec(f"duration_s must be at least 1, got {self.duration_s}")
        if self.interval_s < 1 or self.dwell_slices < 1:
            raise InvalidSpec("interval_s and dwell_slices must be at least 1")
        if self.macro_page_bytes < ALIGN_BYTES or self.footprint_bytes < 1:
            raise InvalidSpec("footprint and macro page size must be positive")
        if not 0 <= self.hot_page < self.n_pages:
            raise InvalidSpec(f"hot_page {self.hot_page} outside the {self.n_pages}-page footprint")
        if self.movement is Movement.STEP and not 1 <= self.effective_span <= self.n_pages - self.hot_page:
            raise InvalidSpec(f"step span {self.span} does not fit the footprint from page {self.hot_page}")
        if not 0 <= self.read_ratio <= 1:
            raise InvalidSpec(f"read_ratio must be in [0, 1], got {self.read_ratio}")

    @classmethod
    def from_dict(cls, data: dict) -> "SynthSpec":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidSpec(f"Unknown spec key(s): {', '.join(sorted(unknown))}")
        try:
            return cls(**data)
        except (TypeError, ValueError) as e:
            if isinstance(e, InvalidSpec):
                raise
            raise InvalidSpec(str(e))

    @classmethod
    def load(cls, path: Union[str, Path]) -> "SynthSpec":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise InvalidSpec(f"Spec file not found: {path}")
        except json.JSONDecodeError as e:
            raise InvalidSpec(f"Spec file {path} is not valid JSON: {e}")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["movement"] = self.movement.value
        data["io_sizes"] = [list(pair) for pair in self.io_sizes]
        return data


def _normalize_sizes(sizes) -> tuple:
    if isinstance(sizes, int):
        sizes = ((sizes, 1.0),)
    pairs = []
    for item in sizes:
        if isinstance(item, int):
            item = (item, 1.0)
        try:
            size, weight = int(item[0]), float(item[1])
        except (TypeError, ValueError, IndexError):
            raise InvalidSpec(f"io_sizes entries must be size or [size, weight], got {item!r}")
        if size < 1 or weight <= 0:
            raise InvalidSpec(f"io size and weight must be positive, got {item!r}")
        pairs.append((size, weight))
    if not 1 <= len(pairs) <= 2:
        raise InvalidSpec("io_sizes must be a fixed size or a two-point distribution")
    total = sum(w for _, w in pairs)
    return tuple((s, w / total) for s, w in pairs)


def hot_page_schedule(spec: SynthSpec, rng: SplitMix64) -> list:
    """Hot macro page for every slice of the trace."""
    periods = -(-spec.n_slices // spec.dwell_slices)
    if spec.movement is Movement.FIXED:
        per_period = [spec.hot_page] * periods
    elif spec.movement is Movement.STEP:
        per_period = [spec.hot_page + (i % spec.effective_span) for i in range(periods)]
    else:
        per_period = [rng.randbelow(spec.n_pages) for _ in range(periods)]
    return [per_period[k // spec.dwell_slices] for k in range(spec.n_slices)]


def generate(spec: SynthSpec) -> Workload:
    """Generate the workload described by spec."""
    rng = SplitMix64(spec.seed)
    schedule = hot_page_schedule(spec, rng)
    interval_us = spec.interval_s * 1_000_000
    n_pages = spec.n_pages
    two_point = len(spec.io_sizes) == 2

    records = []
    for i in range(spec.total_requests):
        rel_us = (i * 1_000_000) // spec.request_rate
        hot = schedule[rel_us // interval_us]

        if rng.random() < spec.hot_share or n_pages == 1:
            page = hot
        else:
            page = rng.randbelow(n_pages - 1)
            if page >= hot:
                page += 1

        if two_point:
            size = spec.io_sizes[0][0] if rng.random() < spec.io_sizes[0][1] else spec.io_sizes[1][0]
        else:
            size = spec.io_sizes[0][0]

        page_start = page * spec.macro_page_bytes
        page_end = min(page_start + spec.macro_page_bytes, spec.footprint_bytes)
        size = min(size, page_end - page_start)
        slots = (page_end - page_start - size) // ALIGN_BYTES + 1
        offset = page_start + rng.randbelow(slots) * ALIGN_BYTES

        direction = Direction.READ if rng.random() < spec.read_ratio else Direction.WRITE
        records.append(TraceRecord(spec.start_ts_us + rel_us, spec.volume_id, direction, offset, size))

    logger.debug("Generated %d requests for %s (seed %d)", len(records), spec.volume_id, spec.seed)
    return Workload(volume_id=spec.volume_id, records=records)
