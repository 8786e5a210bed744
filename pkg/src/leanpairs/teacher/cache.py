"""Content-addressed disk cache for teacher responses.

One JSON file per key, written via temp-file-then-rename so an interrupted
run never leaves an entry that reads back as valid. Keys hash the model name,
temperature, and exact prompt bytes; anything that changes the completion
changes the key.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path
from typing import Any


def cache_key(model_name: str, temperature: float, prompt: str) -> str:
    h = hashlib.sha256()
    h.update(model_name.encode("utf-8"))
    h.update(b"\x1f")
    h.update(repr(float(temperature)).encode("ascii"))
    h.update(b"\x1f")
    h.update(prompt.encode("utf-8"))
    return h.hexdigest()


class ResponseCache:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def get(self, key: str) -> dict[str, Any] | None:
        path = self._path(key)
        try:
            with path.open("r", encoding="utf-8") as fh:
                entry = json.load(fh)
        except FileNotFoundError:
            return None
        except (OSError, json.JSONDecodeError):
            return None  # unreadable entries behave like misses
        if not isinstance(entry, dict) or "response" not in entry:
            return None
        return entry

    def put(
        self,
        key: str,
        model_name: str,
        temperature: float,
        prompt: str,
        content: str,
        usage: dict[str, int],
    ) -> dict[str, Any]:
        entry = {
            "request": {
                "model": model_name,
                "temperature": temperature,
                "prompt": prompt,
            },
            "response": {"content": content, "usage": usage},
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        }
        path = self._path(key)
        fd, tmp_name = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(json.dumps(entry, ensure_ascii=False))
            os.replace(tmp_name, path)
        except BaseException:
            try:
                os.unlink(tmp_name)
            except OSError:
                pass
            raise
        return entry
