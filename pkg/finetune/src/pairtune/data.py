"""Pair-corpus loading and sequence preparation.

Reads the upstream toolkit's pair JSONL verbatim (fields: formal, informal,
plus provenance we pass through). Sequences are word-level:

    <BOS> informal tokens <SEP> formal tokens <EOS>

with the loss masked up to and including <SEP>, so training scores only the
formal target given the informal prompt.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import torch

from .errors import SchemaError, ValidationError

PAD, BOS, SEP, EOS, UNK = "<pad>", "<bos>", "<sep>", "<eos>", "<unk>"
SPECIALS = (PAD, BOS, SEP, EOS, UNK)


@dataclass(frozen=True)
class Pair:
    formal: str
    informal: str


def load_pairs(path: str | Path) -> list[Pair]:
    """Read pair records; malformed lines raise SchemaError with the line."""
    pairs: list[Pair] = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"invalid JSON ({exc.msg})", lineno) from exc
            if not isinstance(obj, dict):
                raise SchemaError("expected a JSON object", lineno)
            for field in ("formal", "informal"):
                if field not in obj or not isinstance(obj[field], str):
                    raise SchemaError(f"missing or non-string {field!r}", lineno)
            pairs.append(Pair(formal=obj["formal"], informal=obj["informal"]))
    return pairs


class WordVocab:
    """Closed word-level vocabulary with special tokens at fixed ids."""

    def __init__(self, words: list[str]):
        self.itos = list(SPECIALS) + sorted(set(words) - set(SPECIALS))
        self.stoi = {w: i for i, w in enumerate(self.itos)}

    def __len__(self) -> int:
        return len(self.itos)

    @classmethod
    def from_pairs(cls, pairs: list[Pair]) -> "WordVocab":
        words: list[str] = []
        for pair in pairs:
            words.extend(pair.informal.split())
            words.extend(pair.formal.split())
        return cls(words)

    def encode_words(self, text: str) -> list[int]:
        unk = self.stoi[UNK]
        return [self.stoi.get(w, unk) for w in text.split()]

    def to_json_dict(self) -> dict:
        return {"itos": self.itos}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "WordVocab":
        vocab = cls.__new__(cls)
        vocab.itos = list(obj["itos"])
        vocab.stoi = {w: i for i, w in enumerate(vocab.itos)}
        return vocab


def encode_pair(pair: Pair, vocab: WordVocab, max_len: int) -> tuple[list[int], int]:
    """Token ids for one pair plus the index where the scored target begins."""
    bos, sep, eos = vocab.stoi[BOS], vocab.stoi[SEP], vocab.stoi[EOS]
    prompt = [bos] + vocab.encode_words(pair.informal) + [sep]
    target = vocab.encode_words(pair.formal) + [eos]
    ids = (prompt + target)[:max_len]
    target_start = min(len(prompt), max_len)
    return ids, target_start


def make_batches(
    pairs: list[Pair],
    vocab: WordVocab,
    max_len: int,
    batch_size: int,
    shuffle_seed: int | None = None,
) -> list[tuple[torch.Tensor, torch.Tensor]]:
    """Padded (input, labels) batches; label -100 marks masked positions.

    Labels shift by one against inputs (next-token prediction); prompt and
    padding positions are masked out of the loss.
    """
    if not pairs:
        raise ValidationError("corpus contains no pairs")
    encoded = [encode_pair(p, vocab, max_len) for p in pairs]
    order = list(range(len(encoded)))
    if shuffle_seed is not None:
        generator = torch.Generator().manual_seed(shuffle_seed)
        order = torch.randperm(len(encoded), generator=generator).tolist()

    pad = vocab.stoi[PAD]
    batches = []
    for start in range(0, len(order), batch_size):
        chunk = [encoded[i] for i in order[start : start + batch_size]]
        width = max(len(ids) for ids, _ in chunk)
        inputs = torch.full((len(chunk), width), pad, dtype=torch.long)
        labels = torch.full((len(chunk), width), -100, dtype=torch.long)
        for row, (ids, target_start) in enumerate(chunk):
            inputs[row, : len(ids)] = torch.tensor(ids, dtype=torch.long)
            # scored positions: predict tokens from target_start onward
            for col in range(target_start, len(ids)):
                labels[row, col] = ids[col]
        batches.append((inputs, labels))
    return batches
