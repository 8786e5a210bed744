"""Fine-tuning: recipe-driven training over prompt-masked pair sequences."""

from __future__ import annotations

import json
from pathlib import Path

import torch

from .data import WordVocab, load_pairs, make_batches
from .errors import OOMGuidanceError, ValidationError
from .model import build_model, sequence_nll
from .recipe import TrainRecipe


def _make_optimizer(model: torch.nn.Module, recipe: TrainRecipe):
    if recipe.optimizer == "adafactor":
        from transformers.optimization import Adafactor

        return Adafactor(
            model.parameters(),
            lr=recipe.learning_rate,
            scale_parameter=False,
            relative_step=False,
            warmup_init=False,
        )
    return torch.optim.AdamW(model.parameters(), lr=recipe.learning_rate)


def finetune(
    corpus_path: str | Path,
    recipe: TrainRecipe,
    out_dir: str | Path,
    vocab: WordVocab | None = None,
) -> Path:
    """Train for exactly recipe.epochs and save checkpoint + recipe snapshot.

    Returns the checkpoint directory. epochs=0 saves the base weights
    untouched, which doubles as a baseline snapshot.
    """
    pairs = load_pairs(corpus_path)
    if not pairs:
        raise ValidationError(f"corpus {corpus_path} contains no pairs")
    if vocab is None:
        vocab = WordVocab.from_pairs(pairs)

    model = build_model(recipe.base_model, vocab, recipe.seed)
    model.train()
    optimizer = _make_optimizer(model, recipe)

    losses: list[float] = []
    try:
        for epoch in range(recipe.epochs):
            batches = make_batches(
                pairs,
                vocab,
                recipe.max_sequence_length,
                recipe.batch_size,
                shuffle_seed=recipe.seed + epoch,
            )
            for inputs, labels in batches:
                optimizer.zero_grad()
                loss = sequence_nll(model(inputs), labels)
                loss.backward()
                optimizer.step()
                losses.append(loss.detach().item())
    except (torch.cuda.OutOfMemoryError, MemoryError) as exc:
        raise OOMGuidanceError(recipe.max_sequence_length) from exc
    except RuntimeError as exc:
        if "out of memory" in str(exc).lower():
            raise OOMGuidanceError(recipe.max_sequence_length) from exc
        raise

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    torch.save(model.state_dict(), out_dir / "model.pt")
    recipe.write(out_dir / "recipe.json")
    (out_dir / "vocab.json").write_text(
        json.dumps(vocab.to_json_dict(), ensure_ascii=False), encoding="utf-8"
    )
    (out_dir / "training_log.json").write_text(
        json.dumps(
            {
                "pairs": len(pairs),
                "steps": len(losses),
                "first_loss": losses[0] if losses else None,
                "last_loss": losses[-1] if losses else None,
            },
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    return out_dir


def load_checkpoint(ckpt_dir: str | Path) -> tuple[torch.nn.Module, WordVocab, TrainRecipe]:
    ckpt_dir = Path(ckpt_dir)
    recipe = TrainRecipe.from_file(ckpt_dir / "recipe.json")
    vocab = WordVocab.from_json_dict(
        json.loads((ckpt_dir / "vocab.json").read_text(encoding="utf-8"))
    )
    model = build_model(recipe.base_model, vocab, recipe.seed)
    model.load_state_dict(torch.load(ckpt_dir / "model.pt", weights_only=True))
    model.eval()
    return model, vocab, recipe
