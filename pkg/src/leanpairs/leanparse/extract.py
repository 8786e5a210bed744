"""Mine theorem/lemma/def declarations out of Lean source text.

A declaration starts at a line whose first token is one of the three keywords
while outside any bracket nesting, and extends to the next such line or end of
file. The header/proof split happens at the first `:=` that sits at bracket
depth zero. No elaboration, no comment or string awareness: this is a lexical
miner, not a Lean front end.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

from ..errors import UnbalancedDeclaration
from ..records import TheoremRecord, content_id

DECL_RE = re.compile(r"^[ \t]*(theorem|lemma|def)\b", re.MULTILINE)
NAME_RE = re.compile(r"(?:theorem|lemma|def)\s+([^\s({\[⦃:]+)")

_OPEN = "([{"
_CLOSE = ")]}"

# Display-convention folding for common Lean glyphs; anything still non-ASCII
# afterwards is NFKD-decomposed and dropped.
ASCII_FOLD_TABLE = {
    "∀": "for all",
    "∃": "there exists",
    "→": "to",
    "↔": "iff",
    "≤": "<=",
    "≥": ">=",
    "≠": "!=",
    "∈": "in",
    "∉": "not in",
    "⊆": "subset",
    "⊂": "strict subset",
    "∑": "sum",
    "∏": "prod",
    "ℕ": "N",
    "ℤ": "Z",
    "ℚ": "Q",
    "ℝ": "R",
    "ℂ": "C",
    "¬": "not ",
    "∧": "and",
    "∨": "or",
    "⊢": "|-",
}


def ascii_fold(text: str) -> str:
    """Best-effort translation of Lean Unicode into plain ASCII."""
    out = []
    for ch in text:
        if ch in ASCII_FOLD_TABLE:
            out.append(ASCII_FOLD_TABLE[ch])
        elif ord(ch) < 128:
            out.append(ch)
        else:
            out.append(unicodedata.normalize("NFKD", ch).encode("ascii", "ignore").decode())
    return "".join(out)


@dataclass
class ExtractionResult:
    records: list[TheoremRecord] = field(default_factory=list)
    warnings: list[UnbalancedDeclaration] = field(default_factory=list)
    keyword_counts: dict[str, int] = field(default_factory=dict)


def _bracket_depth_deltas(text: str) -> list[int]:
    """Running bracket depth at the start of each line of `text`."""
    depths = []
    depth = 0
    for line in text.split("\n"):
        depths.append(depth)
        for ch in line:
            if ch in _OPEN:
                depth += 1
            elif ch in _CLOSE:
                depth = max(depth - 1, 0)
    return depths


def _find_toplevel_assign(text: str) -> int:
    """Offset of the first `:=` at bracket depth zero, or -1."""
    depth = 0
    i = 0
    while i < len(text) - 1:
        ch = text[i]
        if ch in _OPEN:
            depth += 1
        elif ch in _CLOSE:
            depth = max(depth - 1, 0)
        elif depth == 0 and ch == ":" and text[i + 1] == "=":
            return i
        i += 1
    return -1


def extract_theorems(
    source_text: str,
    source_file: str,
    fold_ascii: bool = False,
) -> ExtractionResult:
    """Mine every top-level declaration from one source text.

    Headers with no `:=` terminator within their extent are skipped and
    reported in the result's warnings, never silently dropped. Records come
    back ordered by starting line.
    """
    result = ExtractionResult()
    if not source_text.strip():
        return result

    lines = source_text.split("\n")
    line_offsets = []
    pos = 0
    for line in lines:
        line_offsets.append(pos)
        pos += len(line) + 1
    depths = _bracket_depth_deltas(source_text)

    starts: list[tuple[int, int, str]] = []  # (line index, char offset, keyword)
    for idx, line in enumerate(lines):
        if depths[idx] != 0:
            continue
        m = re.match(r"[ \t]*(theorem|lemma|def)\b", line)
        if m:
            starts.append((idx, line_offsets[idx] + m.start(1), m.group(1)))

    for n, (line_idx, offset, keyword) in enumerate(starts):
        if n + 1 < len(starts):
            end_offset = line_offsets[starts[n + 1][0]]
        else:
            end_offset = len(source_text)
        extent = source_text[offset:end_offset]

        assign = _find_toplevel_assign(extent)
        if assign < 0:
            result.warnings.append(
                UnbalancedDeclaration(
                    f"{source_file}:{line_idx + 1}: unterminated {keyword} "
                    "declaration (no top-level `:=` before the next declaration "
                    "or end of file)"
                )
            )
            continue

        name_m = NAME_RE.match(extent)
        name = name_m.group(1) if name_m else ""
        statement = extent[:assign].strip()
        proof_body = extent[assign + 2 :].strip()
        if fold_ascii:
            statement = ascii_fold(statement)
            proof_body = ascii_fold(proof_body)

        stripped_extent = extent.rstrip()
        end_line = line_idx + 1 + stripped_extent.count("\n")

        result.records.append(
            TheoremRecord(
                id=content_id(source_file, str(line_idx + 1), name, statement, proof_body),
                name=name,
                statement=statement,
                proof_body=proof_body,
                source_file=source_file,
                line_start=line_idx + 1,
                line_end=end_line,
                keyword=keyword,
            )
        )
        result.keyword_counts[keyword] = result.keyword_counts.get(keyword, 0) + 1

    return result
