"""Shared text normalization helpers."""

import re

_TOKEN_RE = re.compile(r"[a-z0-9]+")

# 4-digit years 1500-2199; refuses digit/comma-grouped neighbors so
# figures like "1,609 cities" never read as years
YEAR_RE = re.compile(r"(?<!\d)(?<!\d,)(1[5-9]\d{2}|2[01]\d{2})(?!,?\d)")


def years_in(text: str) -> list[int]:
    return [int(y) for y in YEAR_RE.findall(text)]

# tokens too generic to carry meaning in entailment / same-dataset checks
STOPWORDS = frozenset(
    """a an and are as at based be been by for from in into is it its of on or
    over per that the their this to under used using via we were which with""".split()
)


def tokens(text: str) -> list[str]:
    """Lowercase alphanumeric tokens, in document order."""
    return _TOKEN_RE.findall(text.lower())


def content_tokens(text: str) -> list[str]:
    return [t for t in tokens(text) if t not in STOPWORDS]


def normalize_label(text: str) -> str:
    """Case/punctuation/whitespace-insensitive form for label comparison."""
    return " ".join(_TOKEN_RE.findall(text.lower()))


def tokens_match(a: str, b: str) -> bool:
    """True for equal tokens or a shared stem-like prefix of >= 5 chars."""
    if a == b:
        return True
    if len(a) < 5 or len(b) < 5:
        return False
    return a.startswith(b[:5]) and b.startswith(a[:5])


def token_in(token: str, pool: list[str] | set[str] | frozenset[str]) -> bool:
    return any(tokens_match(token, other) for other in pool)
