"""Format extraction and text filtering: raw files to position-annotated words."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

DEFAULT_STOP_WORDS = frozenset({"a", "an", "the", "is", "of", "to", "in", "and", "or"})

_WORD_WITH_UNDERSCORE = re.compile(r"\w+")
_WORD_NO_UNDERSCORE = re.compile(r"[^\W_]+")


class UnsupportedFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Document:
    fid: str
    ordinal: int
    text: str

    def __post_init__(self) -> None:
        if not self.fid:
            raise ValueError("document fid must be nonempty")
        if self.ordinal < 0:
            raise ValueError("document ordinal must be nonnegative")


@dataclass(frozen=True)
class Token:
    word: str
    position: int


@dataclass(frozen=True)
class TextPrepConfig:
    fold_case: bool = True
    stop_words: frozenset[str] = field(default=DEFAULT_STOP_WORDS)
    keep_underscore: bool = True

    def __post_init__(self) -> None:
        # stop words must compare equal to tokens normalized the same way
        object.__setattr__(
            self, "stop_words", frozenset(normalize(w, self.fold_case) for w in self.stop_words)
        )


def normalize(word: str, fold_case: bool) -> str:
    return word.lower() if fold_case else word


def _read_txt(path: Path) -> str:
    return path.read_text(encoding="utf-8")


EXTRACTORS: dict[str, Callable[[Path], str]] = {".txt": _read_txt}


def register_extractor(extension: str, extractor: Callable[[Path], str]) -> None:
    """Plug in content extraction for another file extension (e.g. ``.doc``)."""
    EXTRACTORS[extension.lower()] = extractor


def extract_text(path: str | Path) -> str:
    path = Path(path)
    ext = path.suffix.lower()
    extractor = EXTRACTORS.get(ext)
    if extractor is None:
        raise UnsupportedFormatError(f"unsupported format: {ext or '(no extension)'!r}")
    return extractor(path)


def tokenize(text: str, cfg: TextPrepConfig) -> list[Token]:
    """Split text on whitespace and punctuation.

    Positions count every emitted word, so they stay meaningful after
    stop words are dropped downstream.
    """
    pattern = _WORD_WITH_UNDERSCORE if cfg.keep_underscore else _WORD_NO_UNDERSCORE
    # fold before splitting: lowercasing can emit non-word characters
    text = normalize(text, cfg.fold_case)
    return [Token(m.group(), pos) for pos, m in enumerate(pattern.finditer(text))]


def filter_stopwords(tokens: Iterable[Token], cfg: TextPrepConfig) -> list[Token]:
    return [t for t in tokens if t.word not in cfg.stop_words]


def read_word_file(path: str | Path) -> list[str]:
    """One word per line; ``#`` lines are comments, blank lines are skipped."""
    words = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            words.append(line)
    return words


def load_corpus(directory: str | Path) -> list[Document]:
    """Read every ``.txt`` file of a directory; sorted filename order sets ordinals."""
    paths = sorted(p for p in Path(directory).iterdir() if p.is_file() and p.suffix.lower() == ".txt")
    return [Document(p.name, i, extract_text(p)) for i, p in enumerate(paths)]
