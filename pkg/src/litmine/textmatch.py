"""Evidence localization: exact and fuzzy substring search.

Matching runs over a whitespace-collapsed, lowercased view of the
article text; reported offsets always point into the original text, so
padding or re-casing the article never changes a match status, only its
offset. Fuzzy search seeds candidate windows from shared token trigrams
and scores them with normalized edit similarity.

The edit-distance inner loop is the hot kernel: the compiled
litmine._fuzzy extension is used when the build produced it, otherwise
the pure-Python twin litmine._fuzzy_py. `BACKEND` records which one is
active; benchmarks/bench_textmatch.py compares the two.
"""

from dataclasses import dataclass

try:
    from litmine import _fuzzy as _kernel

    BACKEND = "c"
except ImportError:  # extension not built; speed-only difference
    from litmine import _fuzzy_py as _kernel  # type: ignore[no-redef]

    BACKEND = "python"

levenshtein = _kernel.levenshtein
similarity = _kernel.similarity

FUZZY_THRESHOLD = 0.85

EXACT = "exact"
FUZZY = "fuzzy"
NOT_FOUND = "not_found"


@dataclass(frozen=True)
class Match:
    status: str
    offset: int | None  # start in the original text
    end: int | None  # exclusive end in the original text
    similarity: float


def normalize_with_map(text: str) -> tuple[str, list[int]]:
    """Lowercase and collapse whitespace runs; map each kept char back
    to its index in the original text."""
    out: list[str] = []
    offsets: list[int] = []
    pending_space = False
    for i, ch in enumerate(text):
        if ch.isspace():
            pending_space = bool(out)
            continue
        if pending_space:
            out.append(" ")
            offsets.append(i - 1)
            pending_space = False
        for low in ch.lower():
            out.append(low)
            offsets.append(i)
    return "".join(out), offsets


def _seed_starts(norm_quote: str, norm_text: str) -> list[int]:
    """Candidate window starts anchored on shared token trigrams."""
    token_spans: list[tuple[int, int]] = []
    i = 0
    n = len(norm_quote)
    while i < n:
        if norm_quote[i] == " ":
            i += 1
            continue
        j = norm_quote.find(" ", i)
        if j == -1:
            j = n
        token_spans.append((i, j))
        i = j

    grams: list[tuple[str, int]] = []
    if len(token_spans) >= 3:
        for k in range(len(token_spans) - 2):
            start = token_spans[k][0]
            end = token_spans[k + 2][1]
            grams.append((norm_quote[start:end], start))
    else:
        for start, end in token_spans:
            if end - start >= 4:
                grams.append((norm_quote[start:end], start))

    starts: set[int] = set()

    def add_hits(gram: str, gram_pos: int):
        idx = norm_text.find(gram)
        while idx != -1:
            starts.add(max(0, idx - gram_pos))
            idx = norm_text.find(gram, idx + 1)

    for gram, gram_pos in grams:
        add_hits(gram, gram_pos)

    if not starts and len(norm_quote) >= 4:
        # typo inside every token gram: anchor on character 4-grams
        for pos in {0, len(norm_quote) // 2, len(norm_quote) - 4}:
            add_hits(norm_quote[pos : pos + 4], pos)

    if not starts:  # no shared anchor at all: coarse stride scan
        step = max(1, len(norm_quote) // 2)
        starts.update(range(0, max(1, len(norm_text) - len(norm_quote) + 1), step))
    return sorted(starts)


def locate(quote: str, text: str, threshold: float = FUZZY_THRESHOLD) -> Match:
    """Find the best occurrence of `quote` in `text`.

    Exact match (after normalization) wins; otherwise the best fuzzy
    window at or above `threshold`. Ties break toward the earliest
    offset. Raises ValueError on an empty quote.
    """
    if not quote:
        raise ValueError("quote must be non-empty")
    norm_quote, _ = normalize_with_map(quote)
    norm_text, offsets = normalize_with_map(text)
    if not norm_quote or not norm_text:
        return Match(NOT_FOUND, None, None, 0.0)

    idx = norm_text.find(norm_quote)
    if idx != -1:
        end_norm = idx + len(norm_quote) - 1
        return Match(EXACT, offsets[idx], offsets[end_norm] + 1, 1.0)

    qlen = len(norm_quote)
    slack = max(1, qlen // 10)
    best_sim = 0.0
    best_start = -1
    best_len = 0
    for start in _seed_starts(norm_quote, norm_text):
        for wlen in (qlen, qlen - slack, qlen + slack):
            if wlen <= 0:
                continue
            window = norm_text[start : start + wlen]
            if not window:
                continue
            sim = similarity(norm_quote, window)
            if sim > best_sim:
                best_sim = sim
                best_start = start
                best_len = len(window)

    if best_sim >= threshold:
        end_norm = best_start + best_len - 1
        return Match(FUZZY, offsets[best_start], offsets[end_norm] + 1, best_sim)
    return Match(NOT_FOUND, None, None, best_sim)
