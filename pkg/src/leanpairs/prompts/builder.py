"""Construct the two teacher prompt shapes.

Full-proof prompts carry a fixed instruction paragraph, six worked
(formal, informal) examples rendered as a bracketed list of double-quoted
tuples, and the target declaration as a single-quoted string. Per-tactic
prompts are zero-shot: four labeled blocks plus a one-sentence format
instruction. Both are deterministic byte-for-byte given the same inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..errors import ShotCountError, ValidationError
from ..leanparse import ascii_fold
from ..records import ProofStateTuple, TheoremRecord
from .tuples import render_tuple_element

Shot = tuple[str, str]

FULL_PROOF_SHOT_COUNT = 6

FULL_PROOF_INSTRUCTION = (
    "At the end of this explanation, I will give you 2 things. The first is a "
    "list of tuples that are the translations of entire proofs written in Lean, "
    "which we will denote the formal language, to plain English, also known as "
    "natural language, as tuples or pairs. This is not an exhaustive list, these "
    "are just examples of informalizations. I will then have a proof written in "
    "Lean represented as a string following the newline character after the list "
    "of pairs. Give me the tuple pair of the proof I give you written in Lean and "
    "what you think their natural language equivalent is given your knowledge of "
    "Lean, formatted using LaTeX. Do not output anything else, just the python "
    "tuple I requested. In your output match the exact format "
    "\"('formal', 'informal')\" \\n"
)

FORMAT_REMINDER = (
    "In your output match the exact format \"('formal', 'informal')\""
)

TACTIC_INSTRUCTION = (
    "Give me the python tuple pairing the tactic above with your natural "
    "language explanation of it; in your output match the exact format "
    "\"('formal', 'informal')\""
)

# canonical spellings of a closed goal state in proof-state dumps
GOAL_CLOSED_MARKER = "goals accomplished"


def load_default_shots() -> list[Shot]:
    """The six bundled worked examples (ASCII display convention)."""
    data = resources.files("leanpairs.prompts").joinpath("data/default_shots.json")
    return load_shots_json(data.read_text(encoding="utf-8"))


def load_shots_file(path: str | Path) -> list[Shot]:
    return load_shots_json(Path(path).read_text(encoding="utf-8"))


def load_shots_json(text: str) -> list[Shot]:
    raw = json.loads(text)
    if not isinstance(raw, list):
        raise ValidationError("shots file must be a JSON array of 2-element arrays")
    shots = []
    for entry in raw:
        if not (isinstance(entry, list) and len(entry) == 2):
            raise ValidationError("each shot must be a 2-element array")
        shots.append((str(entry[0]), str(entry[1])))
    return shots


def _double_quoted(value: str) -> str:
    return render_tuple_element(value, quote='"')


def render_shot_list(shots: list[Shot]) -> str:
    """Bracketed list of double-quoted tuples, one per line."""
    rows = [f"({_double_quoted(f)}, {_double_quoted(i)})" for f, i in shots]
    return "[" + ",\n".join(rows) + "]"


def build_full_proof_prompt(
    target: TheoremRecord,
    shots: list[Shot] | None = None,
    fold_ascii: bool = False,
) -> str:
    """Instruction + six shots + the target declaration as a quoted string."""
    if shots is None:
        shots = load_default_shots()
    if len(shots) != FULL_PROOF_SHOT_COUNT:
        raise ShotCountError(
            f"full-proof prompts need exactly {FULL_PROOF_SHOT_COUNT} shots, "
            f"got {len(shots)}"
        )
    formal = target.formal_text
    if fold_ascii:
        formal = ascii_fold(formal)
    return (
        FULL_PROOF_INSTRUCTION
        + "\n"
        + render_shot_list(shots)
        + "\n"
        + render_tuple_element(formal)
    )


@dataclass(frozen=True)
class TacticPrompt:
    """A rendered per-tactic prompt plus degeneracy metadata."""

    text: str
    no_progress: bool = False


def build_tactic_prompt(t: ProofStateTuple, theorem_statement: str) -> TacticPrompt:
    """Zero-shot prompt over one (state before, tactic, state after) step."""
    if not t.tactic.strip():
        raise ValidationError("tactic text is empty")
    if t.state_before is None or t.state_after is None:
        raise ValidationError("proof states must not be null")
    text = (
        "THEOREM:\n"
        f"{theorem_statement}\n"
        "\n"
        "STATE BEFORE:\n"
        f"{t.state_before}\n"
        "\n"
        "TACTIC:\n"
        f"{t.tactic}\n"
        "\n"
        "STATE AFTER:\n"
        f"{t.state_after}\n"
        "\n"
        f"{TACTIC_INSTRUCTION}"
    )
    return TacticPrompt(text=text, no_progress=t.state_before == t.state_after)


@dataclass(frozen=True)
class PromptSpec:
    """One teacher request: which prompt shape, its shots, and its target."""

    mode: str  # full_proof_6shot | tactic_0shot
    target: TheoremRecord | ProofStateTuple
    shots: tuple[Shot, ...] = ()
    theorem_statement: str = ""  # tactic mode only
    fold_ascii: bool = False

    def __post_init__(self):
        if self.mode == "full_proof_6shot":
            if len(self.shots) != FULL_PROOF_SHOT_COUNT:
                raise ShotCountError(
                    f"full_proof_6shot requires {FULL_PROOF_SHOT_COUNT} shots, "
                    f"got {len(self.shots)}"
                )
            if not isinstance(self.target, TheoremRecord):
                raise ValidationError("full_proof_6shot target must be a theorem record")
        elif self.mode == "tactic_0shot":
            if self.shots:
                raise ShotCountError("tactic_0shot requires an empty shot list")
            if not isinstance(self.target, ProofStateTuple):
                raise ValidationError("tactic_0shot target must be a proof-state tuple")
        else:
            raise ValidationError(f"unknown prompt mode {self.mode!r}")

    @property
    def method(self) -> str:
        """Generation-method label used for pair provenance and cost ledgers."""
        return "full_proof_6shot" if self.mode == "full_proof_6shot" else "individual_tactics"

    def render(self) -> str:
        if self.mode == "full_proof_6shot":
            return build_full_proof_prompt(
                self.target, list(self.shots), fold_ascii=self.fold_ascii
            )
        return build_tactic_prompt(self.target, self.theorem_statement).text
