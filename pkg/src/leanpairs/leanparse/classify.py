"""Whole-proof classification: fragment a proof body and classify each piece."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..records import TacticMatch, TheoremRecord
from .patterns import PatternTable, default_table

_BY_PREFIX = re.compile(r"^by\b\s*")


@dataclass
class ClassifiedProof:
    matches: list[TacticMatch] = field(default_factory=list)
    fragments: list[str] = field(default_factory=list)

    @property
    def coverage(self) -> float:
        """Matched fraction of fragments; 0.0 for an empty proof."""
        if not self.fragments:
            return 0.0
        return len(self.matches) / len(self.fragments)


def split_tactic_fragments(proof_body: str) -> list[str]:
    """Split a proof body into candidate tactic lines.

    Splits on newlines and on `;` at bracket depth zero, so `simp [a; b]`
    stays whole. A leading `by` token (the Lean 4 tactic-block opener) is
    dropped rather than counted as an unmatchable fragment.
    """
    body = _BY_PREFIX.sub("", proof_body.strip(), count=1)
    fragments: list[str] = []
    for line in body.split("\n"):
        depth = 0
        current: list[str] = []
        for ch in line:
            if ch in "([{":
                depth += 1
            elif ch in ")]}":
                depth = max(depth - 1, 0)
            if ch == ";" and depth == 0:
                fragments.append("".join(current))
                current = []
            else:
                current.append(ch)
        fragments.append("".join(current))
    return [f.strip() for f in fragments if f.strip()]


def classify_proof(
    record: TheoremRecord, table: PatternTable | None = None
) -> ClassifiedProof:
    """Classify every fragment of a proof body, keeping match order.

    Unmatched fragments are omitted from `matches` but still counted in the
    coverage denominator.
    """
    table = table or default_table()
    result = ClassifiedProof(fragments=split_tactic_fragments(record.proof_body))
    for fragment in result.fragments:
        match = table.classify(fragment)
        if match is not None:
            result.matches.append(match)
    return result
