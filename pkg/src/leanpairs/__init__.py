"""leanpairs: mine Lean theorem corpora into (formal, informal) training data.

Three generation routes share one record model: template informalization of
classified tactic lines, teacher-LLM distillation (full-proof six-shot and
per-tactic zero-shot), and an on-the-fly round-trip training loop. The
`leanpairs` CLI wires them into reproducible pipeline runs.
"""

__version__ = "0.1.0"

from .records import (
    GENERATION_METHODS,
    PairRecord,
    ProofStateTuple,
    TacticKind,
    TacticMatch,
    TheoremRecord,
)

__all__ = [
    "__version__",
    "GENERATION_METHODS",
    "PairRecord",
    "ProofStateTuple",
    "TacticKind",
    "TacticMatch",
    "TheoremRecord",
]
