"""Minimal BPE trainer, used to build the bundled reference vocabulary.

Not a production trainer: frequency ties break deterministically on the pair's
token ids so the generated files are reproducible byte-for-byte.

Run `python -m leanpairs.tokenizer.train` to regenerate the reference files.
"""

from __future__ import annotations

import json
from collections import Counter
from pathlib import Path

from .bpe import BpeTokenizer, byte_alphabet


def train_bpe(corpus: str, n_merges: int) -> tuple[dict[str, int], list[tuple[str, str]]]:
    """Learn `n_merges` merges over the corpus; returns (vocab, merges)."""
    alphabet = byte_alphabet()
    vocab: dict[str, int] = {alphabet[b]: b for b in range(256)}
    seed_tok = BpeTokenizer(vocab, [])
    words: list[list[str]] = [
        [alphabet[b] for b in pretoken.encode("utf-8")]
        for pretoken in seed_tok.pretokenize(corpus)
    ]

    merges: list[tuple[str, str]] = []
    for _ in range(n_merges):
        counts: Counter[tuple[str, str]] = Counter()
        for word in words:
            for i in range(len(word) - 1):
                counts[(word[i], word[i + 1])] += 1
        if not counts:
            break
        # max count; ties resolve to the lowest (left id, right id) pair
        best = min(
            counts.items(),
            key=lambda kv: (-kv[1], vocab[kv[0][0]], vocab[kv[0][1]]),
        )[0]
        if counts[best] < 2:
            break
        merges.append(best)
        vocab[best[0] + best[1]] = len(vocab)
        left, right = best
        merged = left + right
        for word in words:
            i = 0
            while i < len(word) - 1:
                if word[i] == left and word[i + 1] == right:
                    word[i : i + 2] = [merged]
                else:
                    i += 1
    return vocab, merges


def write_tokenizer_files(
    vocab: dict[str, int],
    merges: list[tuple[str, str]],
    vocab_path: str | Path,
    merges_path: str | Path,
) -> None:
    Path(vocab_path).write_text(
        json.dumps(vocab, ensure_ascii=False, indent=0, sort_keys=False) + "\n",
        encoding="utf-8",
    )
    Path(merges_path).write_text(
        "#version: leanpairs reference\n"
        + "".join(f"{a} {b}\n" for a, b in merges),
        encoding="utf-8",
    )


# Lean-flavored text the reference vocabulary is trained on. The generated
# files are committed; regenerating them must be a no-op.
REFERENCE_CORPUS = """
theorem add_comm (a b : Nat) : a + b = b + a := by simp
theorem mul_comm (a b : Nat) : a * b = b * a := by simp [Nat.mul_comm]
lemma zero_add (n : Nat) : 0 + n = n := by induction n with k ih
lemma succ_le_succ (n m : Nat) : n <= m -> n + 1 <= m + 1 := by intro h
theorem vsub_eq_sub {G : Type*} [AddGroup G] (g1 g2 : G) : g1 - g2 = g1 - g2 := rfl
def double (n : Nat) : Nat := n + n
def square (n : Nat) : Nat := n * n
theorem double_eq_two_mul (n : Nat) : double n = 2 * n := by rw [double]
exact absurd h (lt_irrefl n)
apply le_trans h1 h2
cases n with zero succ
intro x y h
intros a b c
simp [add_assoc, add_comm]
contradiction
rfl
refl
We are beginning a proof by induction on n.
Here, we apply the theorem/lemma mul_comm.
We're rewriting part of the expression using double.
This step concludes that both sides of our equation are identical.
We're breaking down the problem into cases based on n.
We introduce new variables x y h.
We simplify the current expression or goal using the simp tactic.
This step shows that our assumptions lead to a contradiction.
Here, we provide the exact term h that solves our current goal.
We define a function double that takes (n : Nat).
If r is rational and x is irrational, prove that r + x is irrational.
Let P be a p-subgroup of G. Then P is contained in a Sylow p-subgroup of G.
In an additive group G, the subtraction of vectors g1 and g2 is equal to the
subtraction of the group elements g1 and g2.
the proof state before and after each tactic is applied
goals accomplished
"""


def main() -> None:
    here = Path(__file__).resolve().parent / "reference"
    here.mkdir(parents=True, exist_ok=True)
    vocab, merges = train_bpe(REFERENCE_CORPUS, n_merges=384)
    write_tokenizer_files(vocab, merges, here / "vocab.json", here / "merges.txt")
    print(f"wrote {len(vocab)} vocab entries and {len(merges)} merges to {here}")


if __name__ == "__main__":
    main()
