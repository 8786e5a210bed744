"""Pure-Python BPE merge kernel; the import-time fallback for _bpe_core.

Pair keys pack two token ids into one int: (left << 21) | right, which caps
token ids at 2**21 - 1. The kernel repeatedly merges the lowest-ranked
adjacent pair (all its occurrences, left to right) until none remains.
"""

from __future__ import annotations

ID_BITS = 21
ID_MASK = (1 << ID_BITS) - 1
MAX_TOKEN_ID = ID_MASK


def pair_key(left: int, right: int) -> int:
    return (left << ID_BITS) | right


def merge_word(ids: list[int], rank_of: dict[int, int], merged_id: dict[int, int]) -> list[int]:
    """Apply ranked merges to one pretoken's id sequence."""
    word = list(ids)
    while len(word) >= 2:
        best_rank = -1
        best_key = -1
        for i in range(len(word) - 1):
            key = (word[i] << ID_BITS) | word[i + 1]
            rank = rank_of.get(key)
            if rank is not None and (best_rank < 0 or rank < best_rank):
                best_rank = rank
                best_key = key
        if best_key < 0:
            break
        new_id = merged_id[best_key]
        left = best_key >> ID_BITS
        right = best_key & ID_MASK
        merged: list[int] = []
        i = 0
        n = len(word)
        while i < n:
            if i < n - 1 and word[i] == left and word[i + 1] == right:
                merged.append(new_id)
                i += 2
            else:
                merged.append(word[i])
                i += 1
        word = merged
    return word
