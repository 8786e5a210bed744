"""Tactic-line classification against the ten stock patterns.

Matching rules: every pattern anchors at the start of the whitespace-trimmed
line; the bare `reflexivity` and `contradiction` keywords must match the full
line so identifiers such as ``reflexivity_lemma`` are rejected. Ties between
patterns resolve to the earliest rule in table order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..records import TacticKind, TacticMatch

# `refl|rfl` accepts both spellings of the reflexivity tactic; the other nine
# patterns are the stock table verbatim.
DEFAULT_PATTERNS: tuple[tuple[TacticKind, str], ...] = (
    (TacticKind.INDUCTION, r"induction .+ with .+"),
    (TacticKind.APPLY, r"apply .+"),
    (TacticKind.REWRITE, r"rw .+"),
    (TacticKind.REFLEXIVITY, r"refl|rfl"),
    (TacticKind.CASES, r"cases .+"),
    (TacticKind.INTRODUCE, r"intro .+|intros .+"),
    (TacticKind.SIMPLIFICATION, r"simp .+"),
    (TacticKind.CONTRADICTION, r"contradiction"),
    (TacticKind.EXACT, r"exact .+"),
    (TacticKind.DEFINITION, r"def .+ := .+"),
)

# Keyword-only tactics match the whole line; everything else matches a prefix.
FULL_LINE_KINDS = frozenset({TacticKind.REFLEXIVITY, TacticKind.CONTRADICTION})


@dataclass(frozen=True)
class PatternRule:
    kind: TacticKind
    pattern: str
    full_line: bool

    def matches(self, line: str) -> bool:
        rx = re.compile(self.pattern)
        if self.full_line:
            return rx.fullmatch(line) is not None
        return rx.match(line) is not None


class PatternTable:
    """Ordered classification rules; order defines match priority."""

    def __init__(self, rules: list[PatternRule] | tuple[PatternRule, ...]):
        self.rules = tuple(rules)
        kinds = [r.kind for r in self.rules]
        if len(set(kinds)) != len(kinds):
            raise ValueError("duplicate tactic kind in pattern table")
        self._compiled = [
            (r, re.compile(r.pattern)) for r in self.rules
        ]

    @classmethod
    def default(cls) -> "PatternTable":
        return cls(
            [
                PatternRule(kind, pattern, kind in FULL_LINE_KINDS)
                for kind, pattern in DEFAULT_PATTERNS
            ]
        )

    def classify(self, line: str) -> TacticMatch | None:
        """Classify one proof line; None when no pattern matches."""
        trimmed = line.strip()
        if not trimmed:
            return None
        for rule, rx in self._compiled:
            hit = rx.fullmatch(trimmed) if rule.full_line else rx.match(trimmed)
            if hit is not None:
                return TacticMatch(
                    kind=rule.kind,
                    raw_line=trimmed,
                    slots=extract_slots(rule.kind, trimmed),
                )
        return None

    def matching_kinds(self, line: str) -> list[TacticKind]:
        """All kinds whose pattern matches, in table order (for audits)."""
        trimmed = line.strip()
        out = []
        for rule, rx in self._compiled:
            hit = rx.fullmatch(trimmed) if rule.full_line else rx.match(trimmed)
            if hit is not None:
                out.append(rule.kind)
        return out


_DEFAULT_TABLE: PatternTable | None = None


def default_table() -> PatternTable:
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        _DEFAULT_TABLE = PatternTable.default()
    return _DEFAULT_TABLE


def classify_tactic(line: str, table: PatternTable | None = None) -> TacticMatch | None:
    """First-match classification of a single proof line.

    The line must not contain newlines; matching happens on the trimmed text.
    """
    if "\n" in line:
        raise ValueError("classify_tactic takes a single line (no newlines)")
    return (table or default_table()).classify(line)


def _remainder_after(line: str, *keywords: str) -> str:
    """Text after the first matching leading keyword token."""
    for kw in keywords:
        if line.startswith(kw + " "):
            return line[len(kw) + 1 :].strip()
    return ""


def _paren_groups(text: str) -> list[str]:
    """Top-level parenthesized groups, verbatim including the parens."""
    groups, depth, start = [], 0, -1
    for i, ch in enumerate(text):
        if ch == "(":
            if depth == 0:
                start = i
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0 and start >= 0:
                groups.append(text[start : i + 1])
                start = -1
            depth = max(depth, 0)
    return groups


def extract_slots(kind: TacticKind, trimmed: str) -> tuple[tuple[str, str], ...]:
    """Deterministic slot capture for one classified line.

    Slot names are chosen to cover every placeholder of the kind's default
    informalization template; `simplification` additionally captures its
    arguments even though the stock template ignores them.
    """
    if kind == TacticKind.INDUCTION:
        body = _remainder_after(trimmed, "induction")
        variable = body.split(" with", 1)[0].strip()
        return (("variable", variable),)
    if kind == TacticKind.APPLY:
        return (("theorem_name", _remainder_after(trimmed, "apply")),)
    if kind == TacticKind.REWRITE:
        return (("equality_statement", _remainder_after(trimmed, "rw")),)
    if kind == TacticKind.CASES:
        return (("variable_or_condition", _remainder_after(trimmed, "cases")),)
    if kind == TacticKind.INTRODUCE:
        return (("variable_names", _remainder_after(trimmed, "intros", "intro")),)
    if kind == TacticKind.SIMPLIFICATION:
        return (("arguments", _remainder_after(trimmed, "simp")),)
    if kind == TacticKind.EXACT:
        return (("term_name", _remainder_after(trimmed, "exact")),)
    if kind == TacticKind.DEFINITION:
        header = _remainder_after(trimmed, "def")
        header = header.split(" :=", 1)[0].strip()
        name = re.split(r"[\s({\[]", header, maxsplit=1)[0]
        params = " ".join(_paren_groups(header))
        return (("function_name", name), ("parameters", params))
    return ()
