"""
Shared fixtures for the tiertrace test suite.
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from sources.trace import Direction, TraceRecord, Workload  # noqa: E402

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
GIB = 1 << 30


def make_workload(volume_id, requests):
    """requests: (timestamp_us, 'R'|'W', offset, length) tuples."""
    records = [TraceRecord(ts, volume_id, Direction(d), off, length) for ts, d, off, length in requests]
    return Workload.from_records(volume_id, records)


def seconds(n):
    return n * 1_000_000


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def tiny_trace():
    return os.path.join(DATA_DIR, "tiny.trace")


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Point config at an empty temp home so a developer's ~/.tiertrace never leaks in."""
    import config

    home = tmp_path / "home"
    monkeypatch.setattr(config, "CONFIG_DIR", home)
    monkeypatch.setattr(config, "CONFIG_FILE", home / "config.json")
    monkeypatch.delenv("TIERTRACE_OUTPUT_DIR", raising=False)
    return home
