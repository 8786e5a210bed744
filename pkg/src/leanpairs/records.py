"""Core record types exchanged between pipeline stages, plus JSONL helpers.

Field names in the serialized forms are part of the package's external
interface and must not be renamed.
"""

from __future__ import annotations

import hashlib
import json
import unicodedata
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Iterator

from .errors import SchemaError

GENERATION_METHODS = (
    "regex",
    "full_proof_6shot",
    "individual_tactics",
    "otf",
    "external",
)


@dataclass(frozen=True)
class TheoremRecord:
    """One mined declaration: header text up to `:=` plus the proof after it."""

    id: str
    name: str
    statement: str
    proof_body: str
    source_file: str
    line_start: int
    line_end: int
    keyword: str = "theorem"  # theorem | lemma | def; not serialized

    def __post_init__(self):
        if self.line_start > self.line_end:
            raise ValueError(f"line_start {self.line_start} > line_end {self.line_end}")

    @property
    def formal_text(self) -> str:
        """The full declaration, re-joining statement and proof body."""
        if self.proof_body:
            return f"{self.statement} := {self.proof_body}"
        return self.statement

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "name": self.name,
            "statement": self.statement,
            "proof_body": self.proof_body,
            "source_file": self.source_file,
            "line_start": self.line_start,
            "line_end": self.line_end,
        }

    @classmethod
    def from_json_dict(cls, obj: dict[str, Any], line: int | None = None) -> "TheoremRecord":
        try:
            statement = obj["statement"]
            keyword = statement.split(None, 1)[0] if statement.split() else "theorem"
            return cls(
                id=str(obj["id"]),
                name=str(obj["name"]),
                statement=str(statement),
                proof_body=str(obj["proof_body"]),
                source_file=str(obj["source_file"]),
                line_start=int(obj["line_start"]),
                line_end=int(obj["line_end"]),
                keyword=keyword,
            )
        except KeyError as exc:
            raise SchemaError(f"theorem record missing field {exc.args[0]!r}", line) from exc


class TacticKind(str, Enum):
    """The ten recognized tactic pattern kinds, in match-priority order."""

    INDUCTION = "induction"
    APPLY = "apply"
    REWRITE = "rewrite"
    REFLEXIVITY = "reflexivity"
    CASES = "cases"
    INTRODUCE = "introduce"
    SIMPLIFICATION = "simplification"
    CONTRADICTION = "contradiction"
    EXACT = "exact"
    DEFINITION = "definition"


@dataclass(frozen=True)
class TacticMatch:
    """A classified proof line: which pattern matched and what it captured."""

    kind: TacticKind
    raw_line: str
    slots: tuple[tuple[str, str], ...] = ()

    def slot(self, name: str) -> str | None:
        for key, value in self.slots:
            if key == name:
                return value
        return None

    def slot_names(self) -> tuple[str, ...]:
        return tuple(key for key, _ in self.slots)


@dataclass(frozen=True)
class ProofStateTuple:
    """One (state before, tactic, state after) step of a dumped proof."""

    theorem_id: str
    index: int
    state_before: str
    tactic: str
    state_after: str

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "theorem_id": self.theorem_id,
            "index": self.index,
            "state_before": self.state_before,
            "tactic": self.tactic,
            "state_after": self.state_after,
        }


@dataclass
class PairRecord:
    """One (formal, informal) training pair with provenance and token counts."""

    id: str
    formal: str
    informal: str
    method: str
    source: str = ""
    tokens_formal: int = 0
    tokens_informal: int = 0
    low_quality: bool = False

    def __post_init__(self):
        if self.method not in GENERATION_METHODS:
            raise ValueError(f"unknown generation method {self.method!r}")

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "formal": self.formal,
            "informal": self.informal,
            "method": self.method,
            "source": self.source,
            "tokens_formal": self.tokens_formal,
            "tokens_informal": self.tokens_informal,
            "low_quality": self.low_quality,
        }

    @classmethod
    def from_json_dict(cls, obj: dict[str, Any], line: int | None = None) -> "PairRecord":
        try:
            return cls(
                id=str(obj["id"]),
                formal=str(obj["formal"]),
                informal=str(obj["informal"]),
                method=str(obj["method"]),
                source=str(obj.get("source", "")),
                tokens_formal=int(obj.get("tokens_formal", 0)),
                tokens_informal=int(obj.get("tokens_informal", 0)),
                low_quality=bool(obj.get("low_quality", False)),
            )
        except KeyError as exc:
            raise SchemaError(f"pair record missing field {exc.args[0]!r}", line) from exc


def normalize_for_dedup(text: str) -> str:
    """Trim, collapse whitespace runs, and NFC-normalize before hashing."""
    return unicodedata.normalize("NFC", " ".join(text.split()))


def pair_content_id(formal: str, informal: str) -> str:
    """Deterministic id for a pair, stable under whitespace jitter."""
    key = normalize_for_dedup(formal) + "\x1f" + normalize_for_dedup(informal)
    return hashlib.sha256(key.encode("utf-8")).hexdigest()[:16]


def content_id(*parts: str) -> str:
    """Deterministic short id over arbitrary string parts."""
    h = hashlib.sha256("\x1f".join(parts).encode("utf-8"))
    return h.hexdigest()[:16]


def write_jsonl(path: str | Path, rows: Iterable[dict[str, Any]]) -> int:
    """Write one JSON object per line; returns the row count."""
    n = 0
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")
            n += 1
    return n


def read_jsonl(path: str | Path) -> Iterator[tuple[int, dict[str, Any]]]:
    """Yield (1-based line number, object) per non-blank line.

    Raises SchemaError with the line number on malformed JSON or non-object
    rows.
    """
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"invalid JSON ({exc.msg})", lineno) from exc
            if not isinstance(obj, dict):
                raise SchemaError("expected a JSON object", lineno)
            yield lineno, obj
