"""Independent reference implementations used only by the tests."""
from __future__ import annotations

import re


def full_dp_distance(a: str, b: str) -> int:
    """Textbook full-matrix Levenshtein distance."""
    rows, cols = len(a) + 1, len(b) + 1
    m = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        m[i][0] = i
    for j in range(cols):
        m[0][j] = j
    for i in range(1, rows):
        for j in range(1, cols):
            m[i][j] = min(
                m[i - 1][j] + 1,
                m[i][j - 1] + 1,
                m[i - 1][j - 1] + (a[i - 1] != b[j - 1]),
            )
    return m[-1][-1]


def naive_words(text: str) -> list[str]:
    return re.findall(r"\w+", text)


def naive_fuzzy_hits(docs: dict[str, str], dictionary, w: str, k: int) -> set[str]:
    """FIDs of documents holding some dictionary word within k edits of w."""
    near = {e for e in dictionary if full_dp_distance(w, e) <= k}
    return {fid for fid, text in docs.items() if near & set(naive_words(text))}


def one_wildcard_matches(pattern: str, word: str) -> bool:
    """Does a single-`*` pattern express one edit of word (or equal it)?"""
    stars = pattern.count("*")
    if stars == 0:
        return pattern == word
    if stars != 1:
        return False
    if len(pattern) == len(word):
        return all(p == c for p, c in zip(pattern, word) if p != "*")
    if len(pattern) == len(word) + 1:
        return pattern.replace("*", "") == word
    return False
