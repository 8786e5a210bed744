"""Evaluation: mean per-token NLL on formal targets given informal prompts."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import torch

from .data import WordVocab, load_pairs, make_batches
from .errors import ValidationError
from .model import sequence_nll


@dataclass
class EvalReport:
    """dataset/model label -> evaluation loss; always carries a base row."""

    rows: dict[str, float] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {"rows": self.rows}

    def to_markdown(self) -> str:
        lines = [
            "| Fine-Tuning Dataset | Eval Loss |",
            "| --- | --- |",
        ]
        for name, loss in self.rows.items():
            lines.append(f"| {name} | {loss:.4f} |")
        return "\n".join(lines) + "\n"

    def write(self, json_path: str | Path, markdown_path: str | Path | None = None) -> None:
        Path(json_path).write_text(
            json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        if markdown_path is not None:
            Path(markdown_path).write_text(self.to_markdown(), encoding="utf-8")


@torch.no_grad()
def evaluate(
    model: torch.nn.Module,
    test_path: str | Path,
    vocab: WordVocab,
    max_sequence_length: int = 128,
    batch_size: int = 16,
) -> float:
    """Deterministic eval loss; no sampling, no shuffling, no grad."""
    pairs = load_pairs(test_path)
    if not pairs:
        raise ValidationError(f"test set {test_path} is empty")
    model.eval()
    batches = make_batches(pairs, vocab, max_sequence_length, batch_size)
    total, count = 0.0, 0
    for inputs, labels in batches:
        scored = int((labels[:, 1:] != -100).sum())
        if scored == 0:
            continue
        loss = float(sequence_nll(model(inputs), labels))
        total += loss * scored
        count += scored
    if count == 0:
        raise ValidationError("test set has no scored target tokens")
    return total / count
