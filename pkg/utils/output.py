"""
Atomic writers for CSV/JSON results and the run manifest.
"""

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional, Union

import pandas as pd

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def _atomic_write_bytes(path: Path, data: bytes):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise
    logger.debug("Wrote %s (%d bytes)", path, len(data))


def write_text(path: Union[str, Path], text: str) -> Path:
    path = Path(path)
    _atomic_write_bytes(path, text.encode("utf-8"))
    return path


def write_json(path: Union[str, Path], payload) -> Path:
    return write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_csv(path: Union[str, Path], frame: pd.DataFrame) -> Path:
    return write_text(path, frame.to_csv(index=False, lineterminator="\n"))


def file_sha256(path: Union[str, Path], chunk_size: int = 1 << 20) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(chunk_size), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class RunManifest:
    """Everything needed to reproduce one command's output set."""

    command: str
    tool_version: str
    argv: list = field(default_factory=list)
    parameters: dict = field(default_factory=dict)
    schema: Optional[dict] = None
    inputs: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    created_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def add_inputs(self, paths: Iterable[Union[str, Path]]):
        for path in paths:
            path = Path(path)
            self.inputs.append({"path": str(path), "size_bytes": path.stat().st_size, "sha256": file_sha256(path)})

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "tool_version": self.tool_version,
            "argv": list(self.argv),
            "parameters": dict(self.parameters),
            "schema": self.schema,
            "inputs": list(self.inputs),
            "outputs": sorted(self.outputs),
            "created_at": self.created_at,
        }


class OutputSet:
    """A command's output directory; every file written through it lands in the manifest."""

    def __init__(self, directory: Union[str, Path], manifest: RunManifest):
        self.directory = Path(directory)
        self.manifest = manifest

    def _record(self, path: Path) -> Path:
        self.manifest.outputs.append(path.name)
        return path

    def csv(self, name: str, frame: pd.DataFrame) -> Path:
        return self._record(write_csv(self.directory / name, frame))

    def json(self, name: str, payload) -> Path:
        return self._record(write_json(self.directory / name, payload))

    def text(self, name: str, text: str) -> Path:
        return self._record(write_text(self.directory / name, text))

    def close(self) -> Path:
        return write_json(self.directory / MANIFEST_NAME, self.manifest.to_dict())
