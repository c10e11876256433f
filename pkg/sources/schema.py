"""
Trace column schemas.
Maps the five request fields to column positions for the SNIA-style text variants.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from errors import SchemaError

FIELDS = ("timestamp", "volume_id", "direction", "offset", "length")

TIMESTAMP_UNITS_US = {"us": 1, "ms": 1_000, "s": 1_000_000}

DELIMITER_ALIASES = {
    "comma": ",",
    "tab": "\t",
    "space": " ",
    "semicolon": ";",
    "whitespace": None,
}


@dataclass(frozen=True)
class TraceSchema:
    """Column layout and units of a delimiter-separated trace file."""

    columns: dict = field(default_factory=lambda: {name: i for i, name in enumerate(FIELDS)})
    # None splits on any run of whitespace
    delimiter: Union[str, None] = ","
    timestamp_unit: str = "us"
    offset_unit_bytes: int = 1
    length_unit_bytes: int = 1
    read_tokens: tuple = ("R",)
    write_tokens: tuple = ("W",)
    has_header: bool = False

    def __post_init__(self):
        self.validate()

    @classmethod
    def default(cls) -> "TraceSchema":
        return cls()

    @property
    def timestamp_scale(self) -> int:
        """Multiplier from the file's timestamp unit to microseconds."""
        return TIMESTAMP_UNITS_US[self.timestamp_unit]

    @property
    def min_fields(self) -> int:
        return max(self.columns.values()) + 1

    def validate(self):
        """Check that every field is mapped exactly once."""
        missing = [name for name in FIELDS if name not in self.columns]
        if missing:
            raise SchemaError(f"Schema does not map field(s): {', '.join(missing)}")
        unknown = [name for name in self.columns if name not in FIELDS]
        if unknown:
            raise SchemaError(f"Schema maps unknown field(s): {', '.join(unknown)}")
        indices = list(self.columns.values())
        if any(not isinstance(i, int) or i < 0 for i in indices):
            raise SchemaError("Column indices must be non-negative integers")
        if len(set(indices)) != len(indices):
            raise SchemaError("Two fields are mapped to the same column")
        if self.timestamp_unit not in TIMESTAMP_UNITS_US:
            raise SchemaError(
                f"Unknown timestamp unit '{self.timestamp_unit}' (expected one of us, ms, s)"
            )
        if self.offset_unit_bytes < 1 or self.length_unit_bytes < 1:
            raise SchemaError("Unit multipliers must be positive")
        if not self.read_tokens or not self.write_tokens:
            raise SchemaError("Direction tokens must not be empty")
        read = {t.upper() for t in self.read_tokens}
        write = {t.upper() for t in self.write_tokens}
        if read & write:
            raise SchemaError(f"Tokens used for both directions: {', '.join(sorted(read & write))}")

    def direction_lookup(self) -> dict:
        """Case-insensitive token -> 'R'/'W' table."""
        table = {t.upper(): "R" for t in self.read_tokens}
        table.update({t.upper(): "W" for t in self.write_tokens})
        return table

    def to_dict(self) -> dict:
        return {
            "columns": dict(self.columns),
            "delimiter": self.delimiter,
            "timestamp_unit": self.timestamp_unit,
            "offset_unit_bytes": self.offset_unit_bytes,
            "length_unit_bytes": self.length_unit_bytes,
            "read_tokens": list(self.read_tokens),
            "write_tokens": list(self.write_tokens),
            "has_header": self.has_header,
        }

    @classmethod
    def parse(cls, text: str) -> "TraceSchema":
        """
        Parse a key-value schema file.

        Example:
            timestamp = 1
            volume_id = 0
            direction = 2
            offset = 3
            length = 4
            delimiter = comma
            timestamp_unit = s
            read_tokens = R, Read
        """
        columns = {}
        options = {}
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SchemaError(f"Schema line {line_no}: expected 'key = value', got '{raw.strip()}'")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.lower()
            if key in FIELDS:
                if key in columns:
                    raise SchemaError(f"Schema line {line_no}: field '{key}' mapped twice")
                try:
                    columns[key] = int(value)
                except ValueError:
                    raise SchemaError(f"Schema line {line_no}: column index for '{key}' is not an integer")
            elif key == "delimiter":
                options["delimiter"] = _parse_delimiter(value)
            elif key == "timestamp_unit":
                options["timestamp_unit"] = value.lower()
            elif key in ("offset_unit_bytes", "length_unit_bytes"):
                try:
                    options[key] = int(value)
                except ValueError:
                    raise SchemaError(f"Schema line {line_no}: '{key}' must be an integer")
            elif key in ("read_tokens", "write_tokens"):
                options[key] = tuple(t.strip() for t in value.split(",") if t.strip())
            elif key == "has_header":
                options["has_header"] = value.lower() in ("1", "true", "yes", "on")
            else:
                raise SchemaError(f"Schema line {line_no}: unknown key '{key}'")
        return cls(columns=columns, **options)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "TraceSchema":
        path = Path(path)
        if not path.exists():
            raise SchemaError(f"Schema file not found: {path}")
        return cls.parse(path.read_text(encoding="utf-8"))


def _parse_delimiter(value: str):
    lowered = value.lower()
    if lowered in DELIMITER_ALIASES:
        return DELIMITER_ALIASES[lowered]
    if len(value) != 1:
        raise SchemaError(f"Delimiter must be a single character or an alias, got '{value}'")
    return value
