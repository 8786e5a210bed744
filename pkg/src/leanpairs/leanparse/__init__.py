"""Lean source mining: declaration extraction and tactic-line classification."""

from .classify import ClassifiedProof, classify_proof, split_tactic_fragments
from .extract import ExtractionResult, ascii_fold, extract_theorems
from .patterns import (
    DEFAULT_PATTERNS,
    PatternRule,
    PatternTable,
    classify_tactic,
    default_table,
    extract_slots,
)

__all__ = [
    "ClassifiedProof",
    "classify_proof",
    "split_tactic_fragments",
    "ExtractionResult",
    "ascii_fold",
    "extract_theorems",
    "DEFAULT_PATTERNS",
    "PatternRule",
    "PatternTable",
    "classify_tactic",
    "default_table",
    "extract_slots",
]
