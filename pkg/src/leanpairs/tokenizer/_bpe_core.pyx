# cython: boundscheck=False, wraparound=False, language_level=3
"""Compiled BPE merge kernel; semantics identical to _bpe_py.merge_word."""

ID_BITS = 21
ID_MASK = (1 << ID_BITS) - 1
MAX_TOKEN_ID = ID_MASK


def pair_key(long left, long right):
    return (left << 21) | right


def merge_word(ids, dict rank_of, dict merged_id):
    """Apply ranked merges to one pretoken's id sequence."""
    cdef Py_ssize_t n = len(ids)
    if n < 2:
        return list(ids)

    cdef long[::1] word = None
    import array
    buf = array.array("l", ids)
    word = buf

    cdef Py_ssize_t i, out_len
    cdef long best_rank, best_key, key, left, right, new_id
    cdef object rank_obj

    while n >= 2:
        best_rank = -1
        best_key = -1
        for i in range(n - 1):
            key = (word[i] << 21) | word[i + 1]
            rank_obj = rank_of.get(key)
            if rank_obj is not None:
                if best_rank < 0 or <long> rank_obj < best_rank:
                    best_rank = <long> rank_obj
                    best_key = key
        if best_key < 0:
            break
        new_id = <long> merged_id[best_key]
        left = best_key >> 21
        right = best_key & 0x1FFFFF
        out_len = 0
        i = 0
        while i < n:
            if i < n - 1 and word[i] == left and word[i + 1] == right:
                word[out_len] = new_id
                i += 2
            else:
                word[out_len] = word[i]
                i += 1
            out_len += 1
        n = out_len

    return [word[i] for i in range(n)]
