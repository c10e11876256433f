"""
Error types for tiertrace.
Every error carries the process exit code the CLI uses for it.
"""

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_CAPACITY = 4
EXIT_IO = 5
EXIT_DATA = 6


class TierTraceError(Exception):
    """Base class for all tiertrace errors."""

    exit_code = 1


class MalformedLine(TierTraceError, ValueError):
    """A trace line that cannot be turned into a TraceRecord."""

    exit_code = EXIT_PARSE

    def __init__(self, line_no: int, reason: str, source: str = "<stream>"):
        self.line_no = line_no
        self.reason = reason
        self.source = source
        super().__init__(f"{source}:{line_no}: {reason}")


class SchemaError(TierTraceError, ValueError):
    """Invalid trace schema file or mapping."""

    exit_code = EXIT_PARSE


class InvalidSpec(TierTraceError, ValueError):
    """Invalid synthetic trace specification."""

    exit_code = EXIT_PARSE


class TraceFileError(TierTraceError):
    """Missing or unreadable input file."""

    exit_code = EXIT_IO


class EmptyWorkload(TierTraceError, ValueError):
    exit_code = EXIT_DATA


class EmptySeries(TierTraceError, ValueError):
    exit_code = EXIT_DATA


class EmptySlice(TierTraceError, ValueError):
    exit_code = EXIT_DATA


class NoActivity(TierTraceError, ValueError):
    exit_code = EXIT_DATA


class CapacityInfeasible(TierTraceError):
    """The first tier cannot hold what a placement policy asks for."""

    exit_code = EXIT_CAPACITY

    def __init__(self, message: str, required_bytes: int = 0, capacity_bytes: int = 0):
        self.required_bytes = required_bytes
        self.capacity_bytes = capacity_bytes
        super().__init__(message)
