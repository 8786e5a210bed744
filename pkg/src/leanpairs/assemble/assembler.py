"""Merge pair streams into one deduplicated, token-accounted corpus.

Duplicates are detected on the whitespace/NFC-normalized (formal, informal)
text; ids are content hashes over the same normalization, so assembling the
same material twice is a no-op. Malformed records are quarantined with a
reason instead of failing the run.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Iterable

from ..errors import RatioError
from ..records import GENERATION_METHODS, PairRecord, pair_content_id
from ..tokenizer import BpeTokenizer
from .stats import CorpusStats, compute_stats

PairStream = tuple[str, Iterable[dict[str, Any]]]


@dataclass
class AssembleResult:
    records: list[PairRecord] = field(default_factory=list)
    stats: CorpusStats = field(default_factory=CorpusStats)
    quarantined: list[tuple[dict[str, Any], str]] = field(default_factory=list)


def _validate(obj: dict[str, Any], default_method: str) -> PairRecord | str:
    """Build a PairRecord from a raw row, or return a quarantine reason."""
    if not isinstance(obj, dict):
        return "record is not an object"
    formal = obj.get("formal")
    informal = obj.get("informal")
    if not isinstance(formal, str):
        return "missing or non-string 'formal'"
    if not isinstance(informal, str):
        return "missing or non-string 'informal'"
    method = obj.get("method", default_method)
    if method not in GENERATION_METHODS:
        return f"unknown method {method!r}"
    low_quality = bool(obj.get("low_quality", False))
    if (not formal.strip() or not informal.strip()) and not low_quality:
        return "empty formal/informal on a record not flagged low_quality"
    source = obj.get("source", "")
    if not isinstance(source, str):
        return "non-string 'source'"
    return PairRecord(
        id=pair_content_id(formal, informal),
        formal=formal,
        informal=informal,
        method=method,
        source=source,
        low_quality=low_quality,
    )


def count_tokens(text: str, tokenizer: BpeTokenizer) -> int:
    """Deterministic BPE token count under the supplied vocab+merges."""
    return tokenizer.count(text)


def assemble(
    inputs: list[PairStream],
    tokenizer: BpeTokenizer,
) -> AssembleResult:
    """Merge tagged pair streams: validate, dedup, recount tokens, sort.

    Token counts are recomputed for every kept record so the serialized
    counts always equal what the supplied tokenizer produces.
    """
    result = AssembleResult()
    seen: set[str] = set()
    duplicates: dict[str, int] = {}
    for method_tag, stream in inputs:
        for obj in stream:
            validated = _validate(obj, method_tag)
            if isinstance(validated, str):
                result.quarantined.append((obj, validated))
                continue
            if validated.id in seen:
                duplicates[validated.method] = duplicates.get(validated.method, 0) + 1
                continue
            seen.add(validated.id)
            validated.tokens_formal = tokenizer.count(validated.formal)
            validated.tokens_informal = tokenizer.count(validated.informal)
            result.records.append(validated)
    result.records.sort(key=lambda r: (r.method, r.id))
    result.stats = compute_stats(result.records, duplicates)
    return result


def split(
    records: list[PairRecord],
    ratios: tuple[float, float, float],
    seed: int,
) -> tuple[list[PairRecord], list[PairRecord], list[PairRecord]]:
    """Deterministic grouped train/val/test split.

    All pairs sharing a source (theorem locator) travel together, so a group
    can overshoot its target split size; empty sources group by record id.
    """
    if len(ratios) != 3:
        raise RatioError("expected exactly three ratios (train, val, test)")
    if any(r < 0 for r in ratios):
        raise RatioError("ratios must be non-negative")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise RatioError(f"ratios must sum to 1, got {sum(ratios)!r}")

    groups: dict[str, list[PairRecord]] = {}
    for record in records:
        groups.setdefault(record.source or record.id, []).append(record)
    keys = sorted(groups)
    random.Random(seed).shuffle(keys)

    total = len(records)
    # largest-remainder targets that sum exactly to the corpus size
    raw = [r * total for r in ratios]
    targets = [int(x) for x in raw]
    remainders = sorted(
        range(3), key=lambda i: (raw[i] - targets[i], -i), reverse=True
    )
    for i in remainders[: total - sum(targets)]:
        targets[i] += 1

    buckets: tuple[list[PairRecord], ...] = ([], [], [])
    current = 0
    for key in keys:
        while current < 2 and len(buckets[current]) >= targets[current]:
            current += 1
        buckets[current].extend(groups[key])
    return buckets
