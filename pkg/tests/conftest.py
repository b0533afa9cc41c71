from __future__ import annotations

import random

import pytest

from fuzzidx import Credentials, Document, TextPrepConfig

TABLE1_TEXTS = [
    "Everyone likes Aishwarya_Rai",
    "Aishwarya_Rai is a Bollywood actress",
    "There is no one with the likes of Aishwarya_Rai",
]

# word -> (docs, (doc, position) pairs); the "of" row is absent from the
# published table but D2 has it at position 7
TABLE1 = {
    "Everyone": ({0}, [(0, 0)]),
    "likes": ({0, 2}, [(0, 1), (2, 6)]),
    "Aishwarya_Rai": ({0, 1, 2}, [(0, 2), (1, 0), (2, 8)]),
    "is": ({1, 2}, [(1, 1), (2, 1)]),
    "a": ({1}, [(1, 2)]),
    "Bollywood": ({1}, [(1, 3)]),
    "actress": ({1}, [(1, 4)]),
    "There": ({2}, [(2, 0)]),
    "no": ({2}, [(2, 2)]),
    "one": ({2}, [(2, 3)]),
    "with": ({2}, [(2, 4)]),
    "the": ({2}, [(2, 5)]),
    "of": ({2}, [(2, 7)]),
}


@pytest.fixture
def table1_docs() -> list[Document]:
    return [Document(f"D{i}.txt", i, t) for i, t in enumerate(TABLE1_TEXTS)]


@pytest.fixture
def verbatim_cfg() -> TextPrepConfig:
    return TextPrepConfig(fold_case=False, stop_words=frozenset())


@pytest.fixture
def creds() -> Credentials:
    return Credentials("alice", "correct horse")


@pytest.fixture(scope="session")
def english_words() -> list[str]:
    english_words_mod = pytest.importorskip("english_words")
    words = english_words_mod.get_english_words_set(["gcide"], lower=True, alpha=True)
    return sorted(words)


@pytest.fixture(scope="session")
def english_dict_file(tmp_path_factory, english_words):
    path = tmp_path_factory.mktemp("dict") / "english.txt"
    path.write_text("# gcide, lowercase alphabetic\n" + "\n".join(english_words) + "\n")
    return path


@pytest.fixture(scope="session")
def words_25k(english_words) -> list[str]:
    return sorted(random.Random(25_000).sample(english_words, 25_000))


_acceptance_results: list[tuple[str, str, float]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance_results.append((marker.args[0], report.outcome.upper(), report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome, duration in _acceptance_results:
        status = "PASS" if outcome == "PASSED" else "FAIL"
        terminalreporter.write_line(f"{status}  {label}  ({duration:.2f}s)")
