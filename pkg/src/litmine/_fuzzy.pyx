# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled edit-distance kernel.

Mirror of litmine._fuzzy_py; selected at import time by
litmine.textmatch when the build produced this extension.
"""

from libc.stdlib cimport free, malloc


cdef int _lev(const unsigned int[::1] a, const unsigned int[::1] b) except -1:
    cdef Py_ssize_t la = a.shape[0]
    cdef Py_ssize_t lb = b.shape[0]
    cdef Py_ssize_t i, j
    cdef int cost, above, left, diag, best
    if la == 0:
        return <int> lb
    if lb == 0:
        return <int> la
    cdef int *prev = <int *> malloc((lb + 1) * sizeof(int))
    cdef int *cur = <int *> malloc((lb + 1) * sizeof(int))
    cdef int *tmp
    if prev == NULL or cur == NULL:
        if prev != NULL:
            free(prev)
        if cur != NULL:
            free(cur)
        raise MemoryError()
    try:
        for j in range(lb + 1):
            prev[j] = <int> j
        for i in range(1, la + 1):
            cur[0] = <int> i
            for j in range(1, lb + 1):
                cost = 0 if a[i - 1] == b[j - 1] else 1
                above = prev[j] + 1
                left = cur[j - 1] + 1
                diag = prev[j - 1] + cost
                best = above if above < left else left
                if diag < best:
                    best = diag
                cur[j] = best
            tmp = prev
            prev = cur
            cur = tmp
        return prev[lb]
    finally:
        free(prev)
        free(cur)


cdef const unsigned int[::1] _codepoints(str s):
    # utf-32-le yields one uint32 per codepoint, no BOM
    return memoryview(s.encode("utf-32-le")).cast("I")


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance between two strings."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) >= len(b):
        return _lev(_codepoints(a), _codepoints(b))
    return _lev(_codepoints(b), _codepoints(a))


def similarity(a: str, b: str) -> float:
    """Normalized edit similarity in [0, 1]; 1.0 for two empty strings."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest
