"""pairtune: desk-scale fine-tuning over (formal, informal) pair corpora.

Consumes the pair JSONL written by the corpus toolkit, fine-tunes a causal
LM on informal-to-formal translation with prompt-masked loss, and reports
evaluation loss next to the un-fine-tuned baseline.
"""

__version__ = "0.1.0"

from .errors import OOMGuidanceError, PairtuneError, SchemaError, ValidationError
from .evaluate import EvalReport, evaluate
from .recipe import TrainRecipe
from .train import finetune, load_checkpoint

__all__ = [
    "__version__",
    "OOMGuidanceError",
    "PairtuneError",
    "SchemaError",
    "ValidationError",
    "EvalReport",
    "evaluate",
    "TrainRecipe",
    "finetune",
    "load_checkpoint",
]
