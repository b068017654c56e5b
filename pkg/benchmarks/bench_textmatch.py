#!/usr/bin/env python3
"""Benchmark the compiled edit-distance kernel against the pure-Python
fallback on representative evidence-localization workloads.

Usage: python benchmarks/bench_textmatch.py [--repeat N]
"""

import argparse
import random
import time

from litmine import _fuzzy_py, textmatch

try:
    from litmine import _fuzzy

    HAVE_C = True
except ImportError:
    _fuzzy = None
    HAVE_C = False


def build_workload(seed=7, n_articles=30, quotes_per_article=6):
    rng = random.Random(seed)
    vocab = (
        "urban city data survey census mobility sensor traffic scores street "
        "network records coverage analysis model period region measure daily "
        "monthly estimates infrastructure transit housing environment"
    ).split()
    workload = []
    for _ in range(n_articles):
        words = [rng.choice(vocab) for _ in range(2500)]
        text = " ".join(words)
        quotes = []
        for _ in range(quotes_per_article):
            start = rng.randrange(0, len(words) - 14)
            quote_words = words[start : start + 12][:]
            # typical provider drift: drop a word, tweak another
            del quote_words[rng.randrange(len(quote_words))]
            idx = rng.randrange(len(quote_words))
            quote_words[idx] = quote_words[idx] + "s"
            quotes.append(" ".join(quote_words))
        workload.append((text, quotes))
    return workload


def run_backend(kernel, workload):
    # localization pipeline with the kernel's similarity swapped in
    original = textmatch.similarity
    textmatch.similarity = kernel.similarity
    try:
        started = time.perf_counter()
        found = 0
        for text, quotes in workload:
            for quote in quotes:
                match = textmatch.locate(quote, text)
                if match.status != textmatch.NOT_FOUND:
                    found += 1
        elapsed = time.perf_counter() - started
    finally:
        textmatch.similarity = original
    return elapsed, found


def bench_raw_distance(kernel, pairs):
    started = time.perf_counter()
    total = 0
    for a, b in pairs:
        total += kernel.levenshtein(a, b)
    return time.perf_counter() - started, total


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    workload = build_workload()
    rng = random.Random(11)
    pairs = [
        (
            "".join(rng.choices("abcdefgh ", k=rng.randint(40, 90))),
            "".join(rng.choices("abcdefgh ", k=rng.randint(40, 90))),
        )
        for _ in range(3000)
    ]

    backends = [("python", _fuzzy_py)]
    if HAVE_C:
        backends.append(("c", _fuzzy))
    else:
        print("compiled kernel not built; benchmarking pure Python only")

    print(f"{'backend':<8}{'locate (s)':>12}{'lev x3000 (s)':>16}{'found':>8}{'checksum':>10}")
    results = {}
    for name, kernel in backends:
        locate_best = min(run_backend(kernel, workload)[0] for _ in range(args.repeat))
        _, found = run_backend(kernel, workload)
        lev_best = min(bench_raw_distance(kernel, pairs)[0] for _ in range(args.repeat))
        _, checksum = bench_raw_distance(kernel, pairs)
        results[name] = (locate_best, lev_best, found, checksum)
        print(f"{name:<8}{locate_best:>12.3f}{lev_best:>16.3f}{found:>8}{checksum:>10}")

    if HAVE_C:
        py, c = results["python"], results["c"]
        assert py[2] == c[2] and py[3] == c[3], "backends disagree"
        print(f"\nspeedup: locate x{py[0] / c[0]:.1f}, raw distance x{py[1] / c[1]:.1f}")
        print(f"active backend in this environment: {textmatch.BACKEND}")


if __name__ == "__main__":
    main()
