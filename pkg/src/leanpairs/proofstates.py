"""Proof-state dump ingestion and tactic-to-sentence alignment.

Dumps arrive as JSON Lines of (state before, tactic, state after) steps.
Loading groups steps by theorem and checks chain consistency (each step's
after-state should equal the next step's before-state); violations are
reported as warnings without altering the data. Alignment pairs each tactic
with one line of an informal whole-proof translation, preferring explicit
"1." numbering and falling back to proportional sentence assignment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EmptyInformalError, SchemaError
from .records import ProofStateTuple, read_jsonl

# spellings that mean "no goals left"; both normalize to the same marker
GOAL_CLOSED = "goals accomplished"

ALIGNMENT_METHODS = ("numbered", "proportional", "manual")

_NUMBER_MARK = re.compile(r"(?:(?<=\s)|^)(\d+)\.\s+")


def normalize_goal_state(state: str) -> str:
    """Canonicalize closed-goal spellings; other states pass through."""
    if state.strip() == "" or state.strip().lower() == GOAL_CLOSED:
        return GOAL_CLOSED
    return state


def is_goal_closed(state: str) -> bool:
    return normalize_goal_state(state) == GOAL_CLOSED


@dataclass
class LoadedStates:
    tuples: list[ProofStateTuple] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def by_theorem(self) -> dict[str, list[ProofStateTuple]]:
        grouped: dict[str, list[ProofStateTuple]] = {}
        for t in self.tuples:
            grouped.setdefault(t.theorem_id, []).append(t)
        return grouped


_REQUIRED_FIELDS = ("theorem_id", "index", "state_before", "tactic", "state_after")


def load_states(path: str | Path) -> LoadedStates:
    """Read proof-state tuples, group by theorem, and flag chain breaks."""
    result = LoadedStates()
    for lineno, obj in read_jsonl(path):
        for name in _REQUIRED_FIELDS:
            if name not in obj:
                raise SchemaError(f"proof-state record missing field {name!r}", lineno)
        if not isinstance(obj["index"], int) or isinstance(obj["index"], bool):
            raise SchemaError("field 'index' must be an integer", lineno)
        for name in ("theorem_id", "state_before", "tactic", "state_after"):
            if not isinstance(obj[name], str):
                raise SchemaError(f"field {name!r} must be a string", lineno)
        result.tuples.append(
            ProofStateTuple(
                theorem_id=obj["theorem_id"],
                index=obj["index"],
                state_before=obj["state_before"],
                tactic=obj["tactic"],
                state_after=obj["state_after"],
            )
        )

    for theorem_id, steps in result.by_theorem().items():
        steps = sorted(steps, key=lambda t: t.index)
        for pos, step in enumerate(steps):
            if step.index != pos:
                result.warnings.append(
                    f"{theorem_id}: indices not contiguous from 0 "
                    f"(found {step.index} at position {pos})"
                )
                break
        for prev, nxt in zip(steps, steps[1:]):
            if prev.state_after != nxt.state_before:
                result.warnings.append(
                    f"{theorem_id}: state_after[{prev.index}] != "
                    f"state_before[{nxt.index}] (chain break)"
                )
    return result


@dataclass(frozen=True)
class AlignedTactic:
    tuple: ProofStateTuple
    informal_line: str
    alignment_method: str

    def to_json_dict(self) -> dict:
        out = self.tuple.to_json_dict()
        out["informal_line"] = self.informal_line
        out["alignment_method"] = self.alignment_method
        return out


def split_sentences(text: str) -> list[str]:
    """Sentences split on `.`, `!`, `?` before whitespace, outside $...$ math."""
    sentences: list[str] = []
    current: list[str] = []
    in_math = False
    i = 0
    while i < len(text):
        ch = text[i]
        current.append(ch)
        if ch == "$":
            in_math = not in_math
        elif ch in ".!?" and not in_math:
            if i + 1 >= len(text) or text[i + 1].isspace():
                sentence = "".join(current).strip()
                if sentence:
                    sentences.append(sentence)
                current = []
        i += 1
    tail = "".join(current).strip()
    if tail:
        sentences.append(tail)
    return sentences


def _numbered_segments(text: str, expected: int) -> list[str] | None:
    """Segments after "1.", "2.", ... markers when they count 1..expected."""
    marks = list(_NUMBER_MARK.finditer(text))
    if [int(m.group(1)) for m in marks] != list(range(1, expected + 1)):
        return None
    segments = []
    for pos, mark in enumerate(marks):
        end = marks[pos + 1].start() if pos + 1 < len(marks) else len(text)
        segment = text[mark.end() : end].strip()
        if not segment:
            return None
        segments.append(segment)
    return segments


def align_tactics_to_lines(
    tuples: list[ProofStateTuple], informal_proof: str
) -> list[AlignedTactic]:
    """Pair every tactic of one theorem with a line of its informal proof.

    Expects the tuples sorted by index and from one theorem. Every tuple
    receives exactly one line; assigned sentence positions are non-decreasing
    in the proportional fallback.
    """
    if not tuples:
        return []
    count = len(tuples)
    segments = _numbered_segments(informal_proof, count)
    if segments is not None:
        return [
            AlignedTactic(t, segment, "numbered")
            for t, segment in zip(tuples, segments)
        ]
    sentences = split_sentences(informal_proof)
    if not sentences:
        raise EmptyInformalError("informal proof has no sentences")
    total = len(sentences)
    return [
        AlignedTactic(t, sentences[(i * total) // count], "proportional")
        for i, t in enumerate(tuples)
    ]
