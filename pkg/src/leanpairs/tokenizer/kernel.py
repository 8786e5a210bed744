"""Merge-kernel selection: compiled extension when built, else pure Python.

Set LEANPAIRS_PURE_PY=1 before import to force the Python kernel. The
benchmark script compares both paths by importing _bpe_core and _bpe_py
directly, so it does not depend on this switch.
"""

from __future__ import annotations

import os

if os.environ.get("LEANPAIRS_PURE_PY") == "1":
    from ._bpe_py import ID_BITS, ID_MASK, MAX_TOKEN_ID, merge_word, pair_key

    BACKEND = "python"
else:
    try:
        from ._bpe_core import ID_BITS, ID_MASK, MAX_TOKEN_ID, merge_word, pair_key

        BACKEND = "compiled"
    except ImportError:
        from ._bpe_py import ID_BITS, ID_MASK, MAX_TOKEN_ID, merge_word, pair_key

        BACKEND = "python"

__all__ = ["ID_BITS", "ID_MASK", "MAX_TOKEN_ID", "merge_word", "pair_key", "BACKEND"]
