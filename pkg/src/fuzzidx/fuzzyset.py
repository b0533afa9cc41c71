"""Fuzzy keyword expansion: dictionary-based (DFS) and wildcard-based (WFS)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .textprep import normalize, read_word_file

WILDCARD = "*"


class EmptyDictionaryError(ValueError):
    pass


@dataclass(frozen=True)
class Dictionary:
    words: tuple[str, ...]
    by_length: Mapping[int, tuple[str, ...]]
    fold_case: bool = False
    _codes: Mapping[int, np.ndarray] = field(default_factory=dict, repr=False, compare=False)
    _members: frozenset[str] = field(default=frozenset(), repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: object) -> bool:
        return word in self._members

    def __iter__(self):
        return iter(self.words)

    def codes(self, length: int) -> np.ndarray:
        """Code-point matrix (words x length) of one length bucket."""
        return self._codes[length]


def load_dictionary(
    words: Iterable[str], stop_words: Iterable[str] = (), fold_case: bool = False
) -> Dictionary:
    stops = {normalize(w, fold_case) for w in stop_words}
    normed = {normalize(w.strip(), fold_case) for w in words}
    normed = sorted(w for w in normed if w and w not in stops)
    if not normed:
        raise EmptyDictionaryError("empty dictionary")
    buckets: dict[int, list[str]] = {}
    for w in normed:
        buckets.setdefault(len(w), []).append(w)
    by_length = {n: tuple(ws) for n, ws in buckets.items()}
    codes = {
        n: np.array([[ord(c) for c in w] for w in ws], dtype=np.int32).reshape(len(ws), n)
        for n, ws in by_length.items()
    }
    return Dictionary(tuple(normed), by_length, fold_case, codes, frozenset(normed))


def load_dictionary_file(
    path, stop_words: Iterable[str] = (), fold_case: bool = False
) -> Dictionary:
    return load_dictionary(read_word_file(path), stop_words, fold_case)


@dataclass(frozen=True)
class DictFuzzySet:
    query: str
    distance: int
    members: frozenset[str]


@dataclass(frozen=True)
class WildcardFuzzySet:
    query: str
    distance: int
    patterns: frozenset[str]
    tau_of: Mapping[str, int]


def dfs_expand(D: Dictionary, w: str, d: int) -> DictFuzzySet:
    """All dictionary words within edit distance ``d`` of ``w``.

    Only the length buckets ``len(w) - d .. len(w) + d`` are scanned; each
    bucket is checked with a banded DP vectorised across its words.
    """
    if d < 0:
        raise ValueError("distance must be nonnegative")
    query = np.array([ord(c) for c in w], dtype=np.int32)
    members: set[str] = set()
    for length in range(max(1, len(w) - d), len(w) + d + 1):
        bucket = D.by_length.get(length)
        if not bucket:
            continue
        for idx in _bucket_within(D.codes(length), query, d):
            members.add(bucket[idx])
    return DictFuzzySet(w, d, frozenset(members))


def _bucket_within(codes: np.ndarray, query: np.ndarray, d: int) -> np.ndarray:
    """Row indices of ``codes`` within distance ``d`` of ``query``."""
    n, width = codes.shape
    q = len(query)
    cap = d + 1
    alive = np.arange(n)
    prev = np.full((width + 1, n), cap, dtype=np.int16)
    for j in range(min(width, d) + 1):
        prev[j] = j
    for i in range(1, q + 1):
        lo = max(1, i - d)
        hi = min(width, i + d)
        cur = np.full((width + 1, len(alive)), cap, dtype=np.int16)
        if i <= d:
            cur[0] = i
        c = query[i - 1]
        for j in range(lo, hi + 1):
            v = prev[j - 1] + (codes[:, j - 1] != c)
            np.minimum(v, prev[j] + 1, out=v)
            np.minimum(v, cur[j - 1] + 1, out=v)
            np.minimum(v, cap, out=v)
            cur[j] = v
        keep = cur[lo - 1 : hi + 1].min(axis=0) <= d
        if not keep.all():
            if not keep.any():
                return alive[:0]
            alive, codes, cur = alive[keep], codes[keep], cur[:, keep]
        prev = cur
    return alive[prev[width] <= d]


def _one_wildcard_step(pattern: str) -> set[str]:
    out = set()
    for i, ch in enumerate(pattern):
        if ch != WILDCARD:
            out.add(pattern[:i] + WILDCARD + pattern[i + 1 :])
    for i in range(len(pattern) + 1):
        out.add(pattern[:i] + WILDCARD + pattern[i:])
    return out


def wfs_expand(w: str, ed: int) -> WildcardFuzzySet:
    """Wildcard patterns of ``w`` with up to ``ed`` wildcards.

    Each ``*`` stands for one edit: a substituted (or deleted) character
    when it replaces a letter, an inserted one when it sits in a gap.
    """
    if WILDCARD in w:
        raise ValueError(f"query word may not contain {WILDCARD!r}: {w!r}")
    if ed < 0:
        raise ValueError("edit distance must be nonnegative")
    patterns = {w}
    frontier = {w}
    for _ in range(ed):
        frontier = set().union(*(_one_wildcard_step(p) for p in frontier)) - patterns
        patterns |= frontier
    return WildcardFuzzySet(w, ed, frozenset(patterns), {p: p.count(WILDCARD) for p in patterns})


@dataclass(frozen=True)
class BenchRow:
    length: int
    wfs_avg: float
    dfs_avg: float
    sample_n: int


def avg_set_sizes(D: Dictionary, lengths: Iterable[int], d: int, sample: int) -> list[BenchRow]:
    """Mean WFS and DFS set sizes per keyword length.

    The first ``sample`` dictionary words of each length (sorted order) are
    expanded. Lengths with no dictionary words produce no row.
    """
    if sample < 1:
        raise ValueError("sample must be positive")
    rows = []
    for length in lengths:
        words = D.by_length.get(length, ())[:sample]
        if not words:
            continue
        wfs = sum(len(wfs_expand(w, d).patterns) for w in words)
        dfs = sum(len(dfs_expand(D, w, d).members) for w in words)
        rows.append(BenchRow(length, wfs / len(words), dfs / len(words), len(words)))
    return rows
