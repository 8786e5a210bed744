"""Byte-level BPE tokenizer defined entirely by external vocab+merges files.

File formats (documented in the README):
  vocab: JSON object mapping token string -> integer id; must cover the 256
         byte symbols of the printable-byte alphabet.
  merges: one merge per line, the two parent tokens space-separated; rank is
          the line order. Blank lines and `#version`-style comment lines are
          skipped.

Counting is deterministic: same text + same files gives the same count on
every platform. The merge loop runs on the compiled kernel when available.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import regex

from ..errors import TokenizerLoadError
from . import kernel

# GPT-2-family pretokenization: contractions, letter runs, digit runs,
# punctuation runs (each optionally taking one leading space), then whitespace.
_PRETOKEN_RE = regex.compile(
    r"""'s|'t|'re|'ve|'m|'ll|'d| ?\p{L}+| ?\p{N}+| ?[^\s\p{L}\p{N}]+|\s+(?!\S)|\s+"""
)

ID_BITS = kernel.ID_BITS
MAX_TOKEN_ID = kernel.MAX_TOKEN_ID


@lru_cache(maxsize=1)
def byte_alphabet() -> dict[int, str]:
    """Bijective map from byte values onto printable unicode symbols."""
    visible = (
        list(range(ord("!"), ord("~") + 1))
        + list(range(ord("¡"), ord("¬") + 1))
        + list(range(ord("®"), ord("ÿ") + 1))
    )
    codes = list(visible)
    bump = 0
    for b in range(256):
        if b not in visible:
            visible.append(b)
            codes.append(256 + bump)
            bump += 1
    return {b: chr(c) for b, c in zip(visible, codes)}


class BpeTokenizer:
    """Encoder/counter over a fixed vocab and ranked merge list."""

    def __init__(self, vocab: dict[str, int], merges: list[tuple[str, str]]):
        self.vocab = dict(vocab)
        self.merges = list(merges)
        alphabet = byte_alphabet()
        missing = [sym for sym in alphabet.values() if sym not in self.vocab]
        if missing:
            raise TokenizerLoadError(
                f"vocab is missing {len(missing)} of the 256 byte symbols "
                f"(first: {missing[0]!r})"
            )
        for token, token_id in self.vocab.items():
            if not isinstance(token_id, int) or token_id < 0 or token_id > MAX_TOKEN_ID:
                raise TokenizerLoadError(
                    f"vocab id for {token!r} must be an int in [0, {MAX_TOKEN_ID}]"
                )
        self._byte_ids = {b: self.vocab[sym] for b, sym in alphabet.items()}
        self._rank_of: dict[int, int] = {}
        self._merged_id: dict[int, int] = {}
        for rank, (left, right) in enumerate(self.merges):
            for part in (left, right, left + right):
                if part not in self.vocab:
                    raise TokenizerLoadError(
                        f"merge {rank} references token {part!r} absent from vocab"
                    )
            key = kernel.pair_key(self.vocab[left], self.vocab[right])
            if key not in self._rank_of:
                self._rank_of[key] = rank
                self._merged_id[key] = self.vocab[left + right]

    @classmethod
    def from_files(cls, vocab_path: str | Path, merges_path: str | Path) -> "BpeTokenizer":
        try:
            with Path(vocab_path).open("r", encoding="utf-8") as fh:
                vocab = json.load(fh)
        except OSError as exc:
            raise TokenizerLoadError(f"cannot read vocab file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise TokenizerLoadError(f"vocab file is not valid JSON ({exc.msg})") from exc
        if not isinstance(vocab, dict):
            raise TokenizerLoadError("vocab file must be a JSON object")

        merges: list[tuple[str, str]] = []
        try:
            with Path(merges_path).open("r", encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, start=1):
                    line = line.rstrip("\n")
                    if not line.strip() or line.startswith("#"):
                        continue
                    parts = line.split(" ")
                    if len(parts) != 2:
                        raise TokenizerLoadError(
                            f"merges line {lineno}: expected two space-separated tokens"
                        )
                    merges.append((parts[0], parts[1]))
        except OSError as exc:
            raise TokenizerLoadError(f"cannot read merges file: {exc}") from exc
        return cls(vocab, merges)

    @classmethod
    def reference(cls) -> "BpeTokenizer":
        """The small bundled vocabulary used in tests and as a CLI default."""
        pkg = resources.files("leanpairs.tokenizer")
        with resources.as_file(pkg.joinpath("reference/vocab.json")) as vocab_path:
            with resources.as_file(pkg.joinpath("reference/merges.txt")) as merges_path:
                return cls.from_files(vocab_path, merges_path)

    def pretokenize(self, text: str) -> list[str]:
        return _PRETOKEN_RE.findall(text)

    def encode(self, text: str) -> list[int]:
        byte_ids = self._byte_ids
        out: list[int] = []
        for pretoken in self.pretokenize(text):
            ids = [byte_ids[b] for b in pretoken.encode("utf-8")]
            out.extend(kernel.merge_word(ids, self._rank_of, self._merged_id))
        return out

    def count(self, text: str) -> int:
        byte_ids = self._byte_ids
        total = 0
        for pretoken in self.pretokenize(text):
            ids = [byte_ids[b] for b in pretoken.encode("utf-8")]
            total += len(kernel.merge_word(ids, self._rank_of, self._merged_id))
        return total

    def decode(self, ids: list[int]) -> str:
        by_id = {v: k for k, v in self.vocab.items()}
        symbols = "".join(by_id[i] for i in ids)
        sym_to_byte = {sym: b for b, sym in byte_alphabet().items()}
        return bytes(sym_to_byte[ch] for ch in symbols).decode("utf-8", errors="replace")


@dataclass(frozen=True)
class TokenizerSpec:
    """Paths naming a tokenizer; the unit the CLI passes around."""

    vocab_path: str
    merges_path: str

    def load(self) -> BpeTokenizer:
        return BpeTokenizer.from_files(self.vocab_path, self.merges_path)
