"""Template-based informalization of classified tactic lines.

Rudimentary by design: each recognized tactic kind maps to one English
sentence template whose named slots are filled from the tactic's captured
values. Proofs with no recognized tactics still produce a pair, flagged
low-quality, so downstream filtering stays auditable.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from .errors import MissingSlot, SchemaError
from .leanparse import ClassifiedProof, classify_proof
from .records import PairRecord, TacticKind, TacticMatch, TheoremRecord, pair_content_id

# informal side used when no tactic in the proof matched any pattern
EMPTY_COVERAGE_SENTINEL = "(no recognized tactics)"

DEFAULT_TEMPLATES: dict[TacticKind, str] = {
    TacticKind.INDUCTION: "We are beginning a proof by induction on {variable}.",
    TacticKind.APPLY: "Here, we apply the theorem/lemma {theorem_name}.",
    TacticKind.REWRITE: "We're rewriting part of the expression using {equality_statement}.",
    TacticKind.REFLEXIVITY: "This step concludes that both sides of our equation are identical.",
    TacticKind.CASES: "We're breaking down the problem into cases based on {variable_or_condition}.",
    TacticKind.INTRODUCE: "We introduce new variables {variable_names}.",
    TacticKind.SIMPLIFICATION: "We simplify the current expression or goal using the simp tactic.",
    TacticKind.CONTRADICTION: "This step shows that our assumptions lead to a contradiction.",
    TacticKind.EXACT: "Here, we provide the exact term {term_name} that solves our current goal.",
    TacticKind.DEFINITION: "We define a function {function_name} that takes {parameters}.",
}

_SLOT_RE = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")


def template_slots(template: str) -> tuple[str, ...]:
    """Slot names referenced by a template, in appearance order."""
    return tuple(_SLOT_RE.findall(template))


def load_template_table(path: str | Path) -> dict[TacticKind, str]:
    """Default table with overrides from a JSON kind→template document.

    Unknown kinds are rejected at load time so typos never silently fall back
    to the stock sentence.
    """
    with Path(path).open("r", encoding="utf-8") as fh:
        try:
            overrides = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"template file is not valid JSON ({exc.msg})") from exc
    if not isinstance(overrides, dict):
        raise SchemaError("template file must be a JSON object of kind -> template")
    table = dict(DEFAULT_TEMPLATES)
    known = {k.value: k for k in TacticKind}
    for key, value in overrides.items():
        if key not in known:
            raise SchemaError(f"unknown tactic kind {key!r} in template file")
        if not isinstance(value, str):
            raise SchemaError(f"template for {key!r} must be a string")
        table[known[key]] = value
    return table


def informalize_tactic(
    match: TacticMatch, table: dict[TacticKind, str] | None = None
) -> str:
    """Render one tactic match through its kind's template.

    Substitution is single-pass, so braces inside slot values are never
    re-interpreted as placeholders.
    """
    table = table or DEFAULT_TEMPLATES
    template = table[match.kind]
    slots = dict(match.slots)

    def fill(m: re.Match[str]) -> str:
        name = m.group(1)
        if name not in slots:
            raise MissingSlot(name, match.kind.value)
        return slots[name]

    return _SLOT_RE.sub(fill, template)


def informalize_proof(
    record: TheoremRecord,
    table: dict[TacticKind, str] | None = None,
    classified: ClassifiedProof | None = None,
) -> tuple[PairRecord, ClassifiedProof]:
    """Build one (formal, informal) pair from a theorem record.

    The informal side is the per-tactic sentences joined by single spaces, in
    proof order; zero recognized tactics yields the sentinel text and a
    low-quality flag.
    """
    if classified is None:
        classified = classify_proof(record)
    sentences = [informalize_tactic(m, table) for m in classified.matches]
    if sentences:
        informal = " ".join(sentences)
        low_quality = False
    else:
        informal = EMPTY_COVERAGE_SENTINEL
        low_quality = True
    formal = record.formal_text
    pair = PairRecord(
        id=pair_content_id(formal, informal),
        formal=formal,
        informal=informal,
        method="regex",
        source=f"{record.source_file}:{record.line_start}",
        low_quality=low_quality,
    )
    return pair, classified
