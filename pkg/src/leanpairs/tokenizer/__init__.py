"""Byte-level BPE tokenization for corpus token accounting.

The merge loop is the hot kernel: a compiled extension is used when it built
successfully, with a pure-Python fallback selected at import time. The active
backend is exposed as `BACKEND`.
"""

from .bpe import BpeTokenizer, TokenizerSpec, byte_alphabet
from .kernel import BACKEND

__all__ = ["BpeTokenizer", "TokenizerSpec", "byte_alphabet", "BACKEND"]
