"""Render and parse the two-element quoted tuple the teacher must emit.

The mandated completion shape is ``('formal', 'informal')``. Rendering
backslash-escapes quotes and backslashes so arbitrary theorem text survives a
round trip; parsing scans for the first balanced two-element tuple and
tolerates surrounding prose or code fences.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import TeacherFormatError

_QUOTES = ("'", '"')


def render_tuple_element(value: str, quote: str = "'") -> str:
    """One quoted element; backslashes, the quote, and newlines are escaped."""
    escaped = (
        value.replace("\\", "\\\\")
        .replace(quote, "\\" + quote)
        .replace("\n", "\\n")
    )
    return f"{quote}{escaped}{quote}"


def render_pair(formal: str, informal: str) -> str:
    """The canonical single-quoted tuple form."""
    return f"({render_tuple_element(formal)}, {render_tuple_element(informal)})"


def _parse_quoted(text: str, i: int) -> tuple[str, int] | None:
    """Parse a quoted string starting at text[i]; returns (value, next index)."""
    if i >= len(text) or text[i] not in _QUOTES:
        return None
    quote = text[i]
    out: list[str] = []
    j = i + 1
    while j < len(text):
        ch = text[j]
        if ch == "\\" and j + 1 < len(text):
            nxt = text[j + 1]
            if nxt in ("\\", "'", '"'):
                out.append(nxt)
            elif nxt == "n":
                out.append("\n")
            elif nxt == "t":
                out.append("\t")
            elif nxt == "r":
                out.append("\r")
            else:
                # unknown escape: keep it verbatim rather than guess
                out.append(ch)
                out.append(nxt)
            j += 2
            continue
        if ch == quote:
            return "".join(out), j + 1
        out.append(ch)
        j += 1
    return None


def _skip_ws(text: str, i: int) -> int:
    while i < len(text) and text[i].isspace():
        i += 1
    return i


def _try_parse_tuple(text: str, start: int) -> tuple[str, str] | None:
    """Attempt to read a two-element quoted tuple at text[start] == '('."""
    i = _skip_ws(text, start + 1)
    first = _parse_quoted(text, i)
    if first is None:
        return None
    value1, i = first
    i = _skip_ws(text, i)
    if i >= len(text) or text[i] != ",":
        return None
    i = _skip_ws(text, i + 1)
    second = _parse_quoted(text, i)
    if second is None:
        return None
    value2, i = second
    i = _skip_ws(text, i)
    if i >= len(text) or text[i] != ")":
        return None  # trailing elements (arity > 2) or junk
    return value1, value2


def parse_teacher_response(raw: str) -> tuple[str, str]:
    """Extract the first well-formed (formal, informal) tuple from raw text.

    Raises TeacherFormatError when no balanced two-element quoted tuple
    exists anywhere in the completion.
    """
    idx = 0
    while True:
        start = raw.find("(", idx)
        if start < 0:
            raise TeacherFormatError(
                "no parseable ('formal', 'informal') tuple in teacher response"
            )
        parsed = _try_parse_tuple(raw, start)
        if parsed is not None:
            return parsed
        idx = start + 1


@dataclass
class TeacherResponse:
    """A raw teacher completion plus its parsed tuple when one exists."""

    raw_text: str
    parsed: tuple[str, str] | None = None

    @classmethod
    def from_raw(cls, raw_text: str) -> "TeacherResponse":
        try:
            return cls(raw_text=raw_text, parsed=parse_teacher_response(raw_text))
        except TeacherFormatError:
            return cls(raw_text=raw_text, parsed=None)
