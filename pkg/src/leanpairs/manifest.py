"""Run manifests: enough provenance to check a pipeline run reproduced.

Every CLI run writes exactly one manifest recording the command line, the
effective configuration, and SHA-256 hashes of all inputs and outputs.
Re-running with identical inputs and seeds must reproduce the output hashes
(timestamps will differ; hashes must not).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any


def file_sha256(path: str | Path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunManifest:
    command: list[str]
    config: dict[str, Any] = field(default_factory=dict)
    input_hashes: dict[str, str] = field(default_factory=dict)
    output_hashes: dict[str, str] = field(default_factory=dict)
    tool_version: str = ""
    started_at: str = field(default_factory=_now)
    finished_at: str = ""

    def add_input(self, path: str | Path) -> None:
        path = Path(path)
        if path.is_file():
            self.input_hashes[str(path)] = file_sha256(path)

    def add_output(self, path: str | Path) -> None:
        path = Path(path)
        if path.is_file():
            self.output_hashes[str(path)] = file_sha256(path)

    def finish(self) -> None:
        self.finished_at = _now()

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "config": self.config,
            "input_hashes": self.input_hashes,
            "output_hashes": self.output_hashes,
            "tool_version": self.tool_version,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
        }

    def write(self, path: str | Path) -> None:
        if not self.finished_at:
            self.finish()
        Path(path).write_text(
            json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
