"""Pure-Python edit-distance kernel.

Fallback implementation used when the compiled litmine._fuzzy extension
is unavailable. Both backends must stay behaviourally identical; the
test suite cross-checks them.
"""


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance between two strings."""
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    # keep the inner loop over the shorter string
    if la < lb:
        a, b = b, a
        la, lb = lb, la
    prev = list(range(lb + 1))
    cur = [0] * (lb + 1)
    for i in range(1, la + 1):
        cur[0] = i
        ca = a[i - 1]
        for j in range(1, lb + 1):
            cost = 0 if ca == b[j - 1] else 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
        prev, cur = cur, prev
    return prev[lb]


def similarity(a: str, b: str) -> float:
    """Normalized edit similarity in [0, 1]; 1.0 for two empty strings."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest
