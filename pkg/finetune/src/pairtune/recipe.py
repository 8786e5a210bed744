"""Training recipe: the stock fine-tuning setup as overridable defaults."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path


@dataclass(frozen=True)
class TrainRecipe:
    # stock defaults: 3 epochs, lr 1e-5, Adafactor
    base_model: str = "gpt2"
    epochs: int = 3
    learning_rate: float = 1e-5
    optimizer: str = "adafactor"  # adafactor | adamw
    seed: int = 0
    max_sequence_length: int = 128
    batch_size: int = 16

    def __post_init__(self):
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.optimizer not in ("adafactor", "adamw"):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")
        if self.max_sequence_length < 8:
            raise ValueError("max_sequence_length must be >= 8")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")

    def to_json_dict(self) -> dict:
        return asdict(self)

    def write(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "TrainRecipe":
        with Path(path).open("r", encoding="utf-8") as fh:
            return cls(**json.load(fh))
