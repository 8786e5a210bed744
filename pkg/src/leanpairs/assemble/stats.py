"""Corpus statistics: per-method pair and token accounting plus reporting.

The human-readable report mirrors the usual token-count comparison table and
always carries a reference row for the MMA training corpus (10,916,097
tokens) so generated corpora can be sized against it at a glance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from statistics import mean, median
from typing import Any, Iterable

from ..records import GENERATION_METHODS, PairRecord

MMA_REFERENCE_TOKEN_COUNT = 10_916_097

METHOD_LABELS = {
    "regex": "Rule-based (regex templates)",
    "full_proof_6shot": "Distilled full proof (6-shot)",
    "individual_tactics": "Distilled individual tactics (0-shot)",
    "otf": "On-the-fly backtranslation",
    "external": "External",
}


@dataclass
class MethodStats:
    pair_count: int = 0
    tokens_formal: int = 0
    tokens_informal: int = 0
    duplicate_count: int = 0
    per_pair_totals: list[int] = field(default_factory=list)

    @property
    def token_total(self) -> int:
        return self.tokens_formal + self.tokens_informal

    @property
    def mean_tokens(self) -> float:
        return mean(self.per_pair_totals) if self.per_pair_totals else 0.0

    @property
    def median_tokens(self) -> float:
        return median(self.per_pair_totals) if self.per_pair_totals else 0.0

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "pair_count": self.pair_count,
            "tokens_formal": self.tokens_formal,
            "tokens_informal": self.tokens_informal,
            "token_total": self.token_total,
            "duplicate_count": self.duplicate_count,
            "mean_tokens": self.mean_tokens,
            "median_tokens": self.median_tokens,
        }


@dataclass
class CorpusStats:
    methods: dict[str, MethodStats] = field(default_factory=dict)

    @property
    def total_pairs(self) -> int:
        return sum(m.pair_count for m in self.methods.values())

    @property
    def total_tokens(self) -> int:
        return sum(m.token_total for m in self.methods.values())

    @property
    def total_duplicates(self) -> int:
        return sum(m.duplicate_count for m in self.methods.values())

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "methods": {m: s.to_json_dict() for m, s in sorted(self.methods.items())},
            "total_pairs": self.total_pairs,
            "total_tokens": self.total_tokens,
            "total_duplicates": self.total_duplicates,
            "mma_reference_tokens": MMA_REFERENCE_TOKEN_COUNT,
        }


def compute_stats(
    records: Iterable[PairRecord], duplicates: dict[str, int] | None = None
) -> CorpusStats:
    stats = CorpusStats()
    for record in records:
        ms = stats.methods.setdefault(record.method, MethodStats())
        ms.pair_count += 1
        ms.tokens_formal += record.tokens_formal
        ms.tokens_informal += record.tokens_informal
        ms.per_pair_totals.append(record.tokens_formal + record.tokens_informal)
    for method, count in (duplicates or {}).items():
        stats.methods.setdefault(method, MethodStats()).duplicate_count += count
    return stats


def render_stats_table(stats: CorpusStats) -> str:
    """Fixed-width comparison table, one row per generation method."""
    headers = ("Data Collection Method", "Pairs", "Formal", "Informal", "Total Tokens", "Dups")
    rows: list[tuple[str, str, str, str, str, str]] = []
    for method in GENERATION_METHODS:
        if method not in stats.methods:
            continue
        ms = stats.methods[method]
        rows.append(
            (
                METHOD_LABELS.get(method, method),
                f"{ms.pair_count:,}",
                f"{ms.tokens_formal:,}",
                f"{ms.tokens_informal:,}",
                f"{ms.token_total:,}",
                f"{ms.duplicate_count:,}",
            )
        )
    rows.append(
        (
            "Total",
            f"{stats.total_pairs:,}",
            "",
            "",
            f"{stats.total_tokens:,}",
            f"{stats.total_duplicates:,}",
        )
    )
    rows.append(("MMA Train (reference)", "", "", "", f"{MMA_REFERENCE_TOKEN_COUNT:,}", ""))

    widths = [
        max(len(headers[i]), *(len(r[i]) for r in rows)) for i in range(len(headers))
    ]

    def fmt(cells: tuple[str, ...]) -> str:
        first = cells[0].ljust(widths[0])
        rest = [cells[i].rjust(widths[i]) for i in range(1, len(cells))]
        return "  ".join([first, *rest]).rstrip()

    sep = "-" * (sum(widths) + 2 * (len(widths) - 1))
    lines = [fmt(headers), sep]
    lines.extend(fmt(r) for r in rows[:-2])
    lines.append(sep)
    lines.append(fmt(rows[-2]))
    lines.append(fmt(rows[-1]))
    return "\n".join(lines)
