"""Desk-scale translators for exercising the round-trip loop.

The substitution-cipher translator is the smallest model for which the
loop's learning signal is meaningful: its formal-to-informal direction is a
fixed seeded token bijection, and the informal-to-formal direction is a
learnable count table trained to invert it. Loss is mean per-token
cross-entropy over the closed vocabulary with teacher-forced alignment and a
uniform-token penalty per length mismatch.
"""

from __future__ import annotations

import math
import random
from importlib import resources
from pathlib import Path
from typing import Sequence

_IL_MARK = "~"


class IdentityTranslator:
    """Both directions are the identity; loss is zero whenever texts agree."""

    def __init__(self, vocab_size: int = 256):
        self.vocab_size = max(2, vocab_size)

    def fl_to_il(self, batch: Sequence[str]) -> list[str]:
        return list(batch)

    def il_to_fl(self, batch: Sequence[str]) -> list[str]:
        return list(batch)

    def loss(self, generated: Sequence[str], reference: Sequence[str]) -> float:
        # point-mass distributions: zero when right, uniform surprise when not
        penalty = math.log(self.vocab_size)
        total = 0.0
        tokens = 0
        for gen, ref in zip(generated, reference):
            gen_tokens = gen.split()
            ref_tokens = ref.split()
            for g, r in zip(gen_tokens, ref_tokens):
                total += 0.0 if g == r else penalty
                tokens += 1
            mismatch = abs(len(gen_tokens) - len(ref_tokens))
            total += mismatch * penalty
            tokens += mismatch
        return total / tokens if tokens else 0.0

    def update(self, loss: float) -> None:
        pass


class SubstitutionCipherTranslator:
    """Learns to invert its own fixed token cipher from round-trip feedback."""

    def __init__(self, corpus: Sequence[str], seed: int = 0, smoothing: float = 0.1):
        vocab = sorted({token for line in corpus for token in line.split()})
        if not vocab:
            raise ValueError("corpus has no tokens")
        self.vocab = vocab
        self.token_id = {t: i for i, t in enumerate(vocab)}
        self.smoothing = smoothing

        rng = random.Random(seed)
        permuted = list(range(len(vocab)))
        rng.shuffle(permuted)
        # IL token for FL token i is the marked form of token permuted[i]
        self._cipher = {vocab[i]: _IL_MARK + vocab[permuted[i]] for i in range(len(vocab))}
        # counts[il_id][fl_id]; il id space mirrors the fl vocabulary
        self._counts: dict[int, dict[int, float]] = {}
        self._last_il: list[list[int]] | None = None
        self._last_ref: list[list[int]] | None = None

    def _il_id(self, il_token: str) -> int | None:
        return self.token_id.get(il_token[len(_IL_MARK) :]) if il_token.startswith(_IL_MARK) else None

    def fl_to_il(self, batch: Sequence[str]) -> list[str]:
        cipher = self._cipher
        return [
            " ".join(cipher.get(token, _IL_MARK + token) for token in line.split())
            for line in batch
        ]

    def il_to_fl(self, batch: Sequence[str]) -> list[str]:
        out = []
        self._last_il = []
        for line in batch:
            il_ids = [self._il_id(token) for token in line.split()]
            self._last_il.append([i if i is not None else -1 for i in il_ids])
            out.append(" ".join(self._predict(i) for i in il_ids))
        return out

    def _predict(self, il_id: int | None) -> str:
        if il_id is None:
            return self.vocab[0]
        row = self._counts.get(il_id)
        if not row:
            return self.vocab[0]
        # argmax with deterministic tie-break on the lowest token id
        best_id = min(row, key=lambda fl_id: (-row[fl_id], fl_id))
        return self.vocab[best_id]

    def _row_distribution(self, il_id: int, fl_id: int) -> float:
        """P(fl token | il token) under additive smoothing."""
        row = self._counts.get(il_id, {})
        total = sum(row.values())
        v = len(self.vocab)
        return (row.get(fl_id, 0.0) + self.smoothing) / (total + self.smoothing * v)

    def loss(self, generated: Sequence[str], reference: Sequence[str]) -> float:
        """Cross-entropy of the reference under the current inversion table.

        Scores the predictive distributions for the informal batch most
        recently passed to il_to_fl, teacher-forced against the reference;
        `generated` only drives the length-mismatch penalty.
        """
        if self._last_il is None or len(self._last_il) != len(reference):
            raise RuntimeError("loss called without a matching il_to_fl pass")
        uniform_nll = math.log(len(self.vocab))
        total = 0.0
        tokens = 0
        self._last_ref = []
        for il_ids, gen, ref in zip(self._last_il, generated, reference):
            ref_ids = [self.token_id.get(t, -1) for t in ref.split()]
            self._last_ref.append(ref_ids)
            for il_id, fl_id in zip(il_ids, ref_ids):
                if il_id < 0 or fl_id < 0:
                    total += uniform_nll
                else:
                    total += -math.log(self._row_distribution(il_id, fl_id))
                tokens += 1
            mismatch = abs(len(gen.split()) - len(ref_ids))
            total += mismatch * uniform_nll
            tokens += mismatch
        return total / tokens if tokens else 0.0

    def update(self, loss: float) -> None:
        """Count-table step from the (informal, reference) pair cached by loss."""
        if self._last_il is None or self._last_ref is None:
            return
        for il_ids, ref_ids in zip(self._last_il, self._last_ref):
            for il_id, fl_id in zip(il_ids, ref_ids):
                if il_id < 0 or fl_id < 0:
                    continue
                row = self._counts.setdefault(il_id, {})
                row[fl_id] = row.get(fl_id, 0.0) + 1.0
        self._last_ref = None


_NOUNS = ("a", "b", "c", "m", "n", "k", "x", "y", "z", "p")
_OPS = ("+", "*", "-")
_TACTICS = ("simp", "rfl", "rw [add_comm]", "exact h", "apply le_trans h1 h2", "induction n with k ih")
_FAMILIES = ("add", "mul", "sub", "le", "lt", "min", "max", "gcd")


def generate_synthetic_corpus(n: int = 200, seed: int = 13) -> list[str]:
    """Deterministic formal-looking sentences for loop experiments."""
    rng = random.Random(seed)
    lines = []
    for i in range(n):
        family = rng.choice(_FAMILIES)
        a, b = rng.choice(_NOUNS), rng.choice(_NOUNS)
        op = rng.choice(_OPS)
        tactic = rng.choice(_TACTICS)
        lines.append(
            f"theorem {family}_prop_{i} ( {a} {b} : Nat ) : "
            f"{a} {op} {b} = {b} {op} {a} := by {tactic}"
        )
    return lines


def load_bundled_corpus() -> list[str]:
    """The committed 200-sentence corpus used by tests and the CLI default."""
    data = resources.files("leanpairs.otf").joinpath("data/synthetic_corpus.txt")
    return [line for line in data.read_text(encoding="utf-8").splitlines() if line.strip()]


def write_bundled_corpus(path: str | Path) -> None:
    Path(path).write_text(
        "\n".join(generate_synthetic_corpus()) + "\n", encoding="utf-8"
    )
