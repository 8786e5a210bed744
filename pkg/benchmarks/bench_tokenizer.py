"""Benchmark the compiled BPE merge kernel against the pure-Python fallback.

Both kernels run over the same synthetic corpus with the bundled reference
vocabulary; results are verified identical before timings are reported.

    python benchmarks/bench_tokenizer.py [--mb 4] [--repeats 3]
"""

from __future__ import annotations

import argparse
import time

from leanpairs.otf import generate_synthetic_corpus
from leanpairs.tokenizer import BpeTokenizer, byte_alphabet
from leanpairs.tokenizer import _bpe_py

try:
    from leanpairs.tokenizer import _bpe_core
except ImportError:
    _bpe_core = None


def build_corpus(target_mb: float) -> str:
    block = "\n".join(generate_synthetic_corpus(500, seed=21)) + "\n"
    repeats = max(1, int(target_mb * 1_000_000 / len(block.encode("utf-8"))))
    return block * repeats


def count_with_kernel(tokenizer: BpeTokenizer, words: list[list[int]], merge_word) -> int:
    rank_of = tokenizer._rank_of
    merged_id = tokenizer._merged_id
    return sum(len(merge_word(ids, rank_of, merged_id)) for ids in words)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--mb", type=float, default=4.0, help="corpus size in MB")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    tokenizer = BpeTokenizer.reference()
    corpus = build_corpus(args.mb)
    alphabet = byte_alphabet()
    words = [
        [tokenizer.vocab[alphabet[b]] for b in pretoken.encode("utf-8")]
        for pretoken in tokenizer.pretokenize(corpus)
    ]
    n_bytes = len(corpus.encode("utf-8"))
    print(f"corpus: {n_bytes / 1e6:.1f} MB, {len(words)} pretokens")

    kernels = [("python", _bpe_py.merge_word)]
    if _bpe_core is not None:
        kernels.append(("compiled", _bpe_core.merge_word))
    else:
        print("compiled kernel not built; benchmarking pure Python only")

    results = {}
    timings = {}
    for name, merge_word in kernels:
        best = float("inf")
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            total = count_with_kernel(tokenizer, words, merge_word)
            best = min(best, time.perf_counter() - t0)
        results[name] = total
        timings[name] = best
        print(f"{name:>9}: {total} tokens in {best:.3f}s "
              f"({n_bytes / best / 1e6:.1f} MB/s)")

    if len(results) == 2:
        assert results["python"] == results["compiled"], "kernel outputs differ!"
        print(f"speedup: {timings['python'] / timings['compiled']:.2f}x")


if __name__ == "__main__":
    main()
