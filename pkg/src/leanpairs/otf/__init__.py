"""On-the-fly backtranslation: loop engine and desk-scale translators."""

from .loop import (
    LoopConfig,
    LoopRun,
    LoopTrace,
    StepRecord,
    TranslatorPort,
    detect_plateau,
    export_pairs,
    run_loop,
    write_loss_svg,
    write_trace_csv,
    write_trace_jsonl,
)
from .toy import (
    IdentityTranslator,
    SubstitutionCipherTranslator,
    generate_synthetic_corpus,
    load_bundled_corpus,
)

__all__ = [
    "LoopConfig",
    "LoopRun",
    "LoopTrace",
    "StepRecord",
    "TranslatorPort",
    "detect_plateau",
    "export_pairs",
    "run_loop",
    "write_loss_svg",
    "write_trace_csv",
    "write_trace_jsonl",
    "IdentityTranslator",
    "SubstitutionCipherTranslator",
    "generate_synthetic_corpus",
    "load_bundled_corpus",
]
