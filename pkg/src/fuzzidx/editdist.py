"""Unit-cost Levenshtein distance (insert, delete, substitute).

Strings are compared per Unicode code point, so a typo inside a multi-byte
character is a single edit.
"""
from __future__ import annotations


def edit_distance(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def within_distance(a: str, b: str, d: int) -> bool:
    """True iff ``edit_distance(a, b) <= d``.

    Rejects on the length gap before touching the DP table, then only
    fills cells within ``d`` of the diagonal.
    """
    if d < 0:
        raise ValueError("distance bound must be nonnegative")
    if abs(len(a) - len(b)) > d:
        return False
    if a == b:
        return True
    return _banded_within(a, b, d)


def _banded_within(a: str, b: str, d: int) -> bool:
    if len(a) > len(b):
        a, b = b, a
    n, m = len(a), len(b)
    cap = d + 1  # anything above d is just "too far"
    prev = [j if j <= d else cap for j in range(m + 1)]
    for i in range(1, n + 1):
        lo = max(1, i - d)
        hi = min(m, i + d)
        cur = [cap] * (m + 1)
        if i <= d:
            cur[0] = i
        ca = a[i - 1]
        for j in range(lo, hi + 1):
            v = prev[j - 1] + (ca != b[j - 1])
            if prev[j] + 1 < v:
                v = prev[j] + 1
            if cur[j - 1] + 1 < v:
                v = cur[j - 1] + 1
            cur[j] = v if v < cap else cap
        # row minima never decrease going down, so a dead band stays dead
        if min(cur[lo - 1 : hi + 1]) > d:
            return False
        prev = cur
    return prev[m] <= d
