"""
Parsing of human-readable sizes, fractions and lists for CLI flags.
"""

import re

SIZE_UNITS = {
    "": 1,
    "b": 1,
    "k": 1 << 10,
    "kb": 1000,
    "kib": 1 << 10,
    "m": 1 << 20,
    "mb": 1000 ** 2,
    "mib": 1 << 20,
    "g": 1 << 30,
    "gb": 1000 ** 3,
    "gib": 1 << 30,
    "t": 1 << 40,
    "tb": 1000 ** 4,
    "tib": 1 << 40,
}

_SIZE_RE = re.compile(r"^\s*(\d+(?:\.\d+)?)\s*([a-zA-Z]*)\s*$")


def parse_size(text: str) -> int:
    """Parse '4096', '4KiB', '1GiB' or '1.5g' into bytes."""
    match = _SIZE_RE.match(str(text))
    if not match:
        raise ValueError(f"Could not parse size: {text}")
    number, unit = match.groups()
    unit = unit.lower()
    if unit not in SIZE_UNITS:
        raise ValueError(f"Unknown size unit '{unit}' in {text}")
    value = float(number) * SIZE_UNITS[unit]
    if value != int(value):
        raise ValueError(f"Size is not a whole number of bytes: {text}")
    return int(value)


def parse_rate(text: str) -> float:
    """Parse a bandwidth like '256MiB/s' or '200MB' into bytes per second."""
    text = str(text).strip()
    if text.lower().endswith("/s"):
        text = text[:-2]
    return float(parse_size(text))


def parse_fraction(text: str) -> float:
    """Parse '0.05' or '5%' into a ratio in (0, 1]."""
    text = str(text).strip()
    value = float(text[:-1]) / 100.0 if text.endswith("%") else float(text)
    if not 0 < value <= 1:
        raise ValueError(f"Fraction must be in (0, 1], got {text}")
    return value


def parse_fraction_list(text: str) -> list:
    """Parse '0.01,0.05,0.10' into a sorted list of distinct fractions."""
    values = [parse_fraction(part) for part in str(text).split(",") if part.strip()]
    if not values:
        raise ValueError("At least one fraction is required")
    if len(set(values)) != len(values):
        raise ValueError(f"Duplicate fractions in {text}")
    return sorted(values)


def parse_duration(text: str) -> int:
    """Parse '15', '15s', '2m' or '1h' into whole seconds."""
    match = re.match(r"^\s*(\d+)\s*([smh]?)\s*$", str(text).lower())
    if not match:
        raise ValueError(f"Could not parse duration: {text}")
    number, unit = match.groups()
    seconds = int(number) * {"": 1, "s": 1, "m": 60, "h": 3600}[unit]
    if seconds < 1:
        raise ValueError(f"Duration must be at least one second: {text}")
    return seconds


def parse_count(text: str) -> int:
    """Parse a whole number of at least 1."""
    match = re.match(r"^\s*(\d+)\s*$", str(text))
    if not match or int(match.group(1)) < 1:
        raise ValueError(f"Expected a whole number of at least 1: {text}")
    return int(match.group(1))


def parse_id_list(text: str) -> set:
    """Comma-separated volume ids."""
    return {part.strip() for part in str(text or "").split(",") if part.strip()}


def format_bytes(value: float) -> str:
    for unit in ("B", "KiB", "MiB", "GiB", "TiB"):
        if abs(value) < 1024 or unit == "TiB":
            return f"{value:.0f} {unit}" if unit == "B" else f"{value:.2f} {unit}"
        value /= 1024
    return f"{value:.2f} TiB"
