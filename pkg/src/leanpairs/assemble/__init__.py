"""Corpus assembly: dedup, token accounting, stats, and splits."""

from .assembler import AssembleResult, assemble, count_tokens, split
from .stats import (
    METHOD_LABELS,
    MMA_REFERENCE_TOKEN_COUNT,
    CorpusStats,
    MethodStats,
    compute_stats,
    render_stats_table,
)

__all__ = [
    "AssembleResult",
    "assemble",
    "count_tokens",
    "split",
    "METHOD_LABELS",
    "MMA_REFERENCE_TOKEN_COUNT",
    "CorpusStats",
    "MethodStats",
    "compute_stats",
    "render_stats_table",
]
