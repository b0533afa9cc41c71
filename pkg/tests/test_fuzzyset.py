import itertools

import pytest
from hypothesis import given, settings, strategies as st

from fuzzidx.fuzzyset import (
    EmptyDictionaryError,
    avg_set_sizes,
    dfs_expand,
    load_dictionary,
    load_dictionary_file,
    wfs_expand,
)

from oracles import full_dp_distance, one_wildcard_matches

COMPUTER_WORDS = ["computer", "compute", "computes", "computers", "commute", "commuted", "rat", "mat"]


def test_load_removes_stopwords():
    D = load_dictionary(["the", "rat", "mat"], stop_words={"the"})
    assert D.words == ("mat", "rat")


def test_load_dedups():
    assert len(load_dictionary(["rat", "rat"])) == 1


def test_load_folds_case_and_stopwords_together():
    D = load_dictionary(["The", "Rat"], stop_words={"THE"}, fold_case=True)
    assert D.words == ("rat",)
    assert "rat" in D and "Rat" not in D


def test_empty_dictionary_rejected():
    with pytest.raises(EmptyDictionaryError):
        load_dictionary(["the"], stop_words={"the"})
    with pytest.raises(EmptyDictionaryError):
        load_dictionary([])


def test_length_buckets():
    D = load_dictionary(["a", "bb", "cc", "ddd"])
    assert D.by_length == {1: ("a",), 2: ("bb", "cc"), 3: ("ddd",)}
    assert D.codes(2).shape == (2, 2)


def test_load_from_file(tmp_path):
    p = tmp_path / "d.txt"
    p.write_text("# words\nrat\n\nmat\n")
    assert load_dictionary_file(p).words == ("mat", "rat")


def test_english_dictionary_has_no_stop_words(english_words):
    stops = {"a", "an", "the", "is", "of", "to", "in", "and", "or"}
    D = load_dictionary(english_words, stop_words=stops)
    assert not stops & set(D.words)
    assert len(D) == len(set(english_words) - stops)


def test_computer_example_follows_edit_distance():
    D = load_dictionary(COMPUTER_WORDS)
    expected = {e for e in COMPUTER_WORDS if full_dp_distance("computer", e) <= 1}
    assert expected == {"computer", "compute", "computes", "computers"}
    assert dfs_expand(D, "computer", 1).members == expected


def test_d0_member_is_itself():
    D = load_dictionary(COMPUTER_WORDS)
    assert dfs_expand(D, "rat", 0).members == {"rat"}


def test_no_neighbours_is_empty():
    D = load_dictionary(COMPUTER_WORDS)
    assert dfs_expand(D, "zzzzzz", 1).members == frozenset()


def test_empty_query_word():
    D = load_dictionary(["a", "ab", "abc"])
    assert dfs_expand(D, "", 2).members == {"a", "ab"}


def test_non_ascii_words():
    D = load_dictionary(["naïve", "naive", "nave"])
    assert dfs_expand(D, "naïve", 1).members == {"naïve", "naive", "nave"}


vocab = st.lists(st.text(alphabet="abcd", min_size=1, max_size=7), min_size=1, max_size=40)


@settings(max_examples=200)
@given(vocab, st.text(alphabet="abcd", max_size=8), st.integers(0, 3))
def test_dfs_equals_brute_force(words, w, d):
    D = load_dictionary(words)
    assert dfs_expand(D, w, d).members == {e for e in set(words) if full_dp_distance(w, e) <= d}


@given(vocab, st.text(alphabet="abcd", max_size=8), st.integers(0, 3))
def test_dfs_monotone_in_distance(words, w, d):
    D = load_dictionary(words)
    assert dfs_expand(D, w, d).members <= dfs_expand(D, w, d + 1).members


@given(vocab, st.integers(0, 3), st.data())
def test_member_query_contains_itself(words, d, data):
    D = load_dictionary(words)
    w = data.draw(st.sampled_from(D.words))
    assert w in dfs_expand(D, w, d).members


def test_student_listing():
    s = wfs_expand("STUDENT", 1)
    listed = {"STUDENT", "*STUDENT", "*TUDENT", "S*TUDENT", "S*UDENT", "STUDEN*T", "STUDEN*", "STUDENT*"}
    assert listed <= s.patterns
    assert len(s.patterns) == 16
    assert s.tau_of["STUDENT"] == 0 and s.tau_of["S*UDENT"] == 1


def test_wfs_distance_zero():
    s = wfs_expand("rat", 0)
    assert s.patterns == {"rat"}


def test_wfs_rejects_wildcard_input():
    with pytest.raises(ValueError):
        wfs_expand("ra*", 1)


def test_wfs_two_wildcards():
    s = wfs_expand("ab", 2)
    assert max(s.tau_of.values()) == 2
    assert {"**", "*a*b", "a**", "**ab"} <= s.patterns
    assert wfs_expand("ab", 1).patterns <= s.patterns
    assert all(p.count("*") == t <= 2 for p, t in s.tau_of.items())


@given(st.text(alphabet="abcdefgh", max_size=10))
def test_wfs_size_law(w):
    size = len(wfs_expand(w, 1).patterns)
    assert size <= 2 * len(w) + 2
    if len(set(w)) == len(w):
        assert size == 2 * len(w) + 2


@given(st.text(alphabet="abcdefgh", min_size=1, max_size=10))
def test_every_pattern_is_one_edit(w):
    assert all(one_wildcard_matches(p, w) for p in wfs_expand(w, 1).patterns)


@pytest.mark.parametrize("w", ["a", "ab", "xyz", "abab"])
def test_wfs_matches_exhaustive_enumeration(w):
    alphabet = sorted(set(w)) + ["*"]
    brute = {
        "".join(chars)
        for n in (len(w), len(w) + 1)
        for chars in itertools.product(alphabet, repeat=n)
        if one_wildcard_matches("".join(chars), w)
    }
    assert wfs_expand(w, 1).patterns == brute


def test_avg_set_sizes_small():
    D = load_dictionary(["cat", "bat", "rat", "cart", "dog", "horse"])
    rows = avg_set_sizes(D, range(3, 7), 1, sample=2)
    assert [r.length for r in rows] == [3, 4, 5]  # no 6-letter words
    r3 = rows[0]
    assert r3.sample_n == 2 and r3.wfs_avg == 8
    # first two 3-letter words: bat -> {bat,cat,rat}, cat -> {bat,cat,rat,cart}
    assert r3.dfs_avg == 3.5


def test_avg_set_sizes_distance_zero():
    D = load_dictionary(["cat", "bat", "rat", "cart"])
    for r in avg_set_sizes(D, range(3, 5), 0, sample=10):
        assert r.wfs_avg == r.dfs_avg == 1
