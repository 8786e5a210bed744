"""Model construction: a built-in tiny causal LM plus hub passthrough.

`tiny-causal` is a from-scratch decoder (word-level, two blocks) sized for
CPU desk runs; any other identifier is treated as a hub model name and
resolved through transformers, which needs the weights available locally or
a network connection.
"""

from __future__ import annotations

import torch
from torch import nn

from .data import WordVocab
from .errors import ValidationError

TINY_MODEL_NAME = "tiny-causal"


class TinyCausalLM(nn.Module):
    """Word-level decoder-only transformer, deliberately small."""

    def __init__(self, vocab_size: int, d_model: int = 128, n_heads: int = 4,
                 n_layers: int = 2, max_len: int = 512):
        super().__init__()
        self.vocab_size = vocab_size
        self.max_len = max_len
        self.embed = nn.Embedding(vocab_size, d_model)
        self.pos = nn.Embedding(max_len, d_model)
        layer = nn.TransformerEncoderLayer(
            d_model=d_model,
            nhead=n_heads,
            dim_feedforward=4 * d_model,
            dropout=0.0,
            batch_first=True,
            norm_first=True,
        )
        self.blocks = nn.TransformerEncoder(
            layer, num_layers=n_layers, enable_nested_tensor=False
        )
        self.norm = nn.LayerNorm(d_model)
        self.lm_head = nn.Linear(d_model, vocab_size, bias=False)

    def forward(self, input_ids: torch.Tensor) -> torch.Tensor:
        _, seq_len = input_ids.shape
        if seq_len > self.max_len:
            raise ValidationError(
                f"sequence length {seq_len} exceeds model maximum {self.max_len}"
            )
        positions = torch.arange(seq_len, device=input_ids.device)
        hidden = self.embed(input_ids) + self.pos(positions)[None, :, :]
        mask = nn.Transformer.generate_square_subsequent_mask(
            seq_len, device=input_ids.device
        )
        hidden = self.blocks(hidden, mask=mask, is_causal=True)
        return self.lm_head(self.norm(hidden))


def build_model(base_model: str, vocab: WordVocab, seed: int) -> nn.Module:
    """Deterministically construct the requested base model."""
    if base_model == TINY_MODEL_NAME:
        torch.manual_seed(seed)
        return TinyCausalLM(vocab_size=len(vocab))
    try:
        from transformers import AutoModelForCausalLM

        return AutoModelForCausalLM.from_pretrained(base_model)
    except Exception as exc:
        raise ValidationError(
            f"could not load base model {base_model!r} "
            f"(hub models need local weights or network access; "
            f"use {TINY_MODEL_NAME!r} for offline desk runs): {exc}"
        ) from exc


def sequence_nll(logits: torch.Tensor, labels: torch.Tensor) -> torch.Tensor:
    """Mean per-token NLL over unmasked label positions (next-token shift)."""
    shifted_logits = logits[:, :-1, :]
    shifted_labels = labels[:, 1:]
    return nn.functional.cross_entropy(
        shifted_logits.reshape(-1, shifted_logits.size(-1)),
        shifted_labels.reshape(-1),
        ignore_index=-100,
    )
