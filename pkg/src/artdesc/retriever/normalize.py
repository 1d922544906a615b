"""Retrieval text normalization: lowercase, stop-word removal, Porter stemming."""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources
from pathlib import Path

from artdesc.retriever.porter import stem

_WORD_RE = re.compile(r"[a-z0-9]+")


def _read_word_list(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    text = resources.files("artdesc.data").joinpath("stopwords.txt").read_text("utf-8")
    return _read_word_list(text)


def load_stopwords(path: str | Path) -> frozenset[str]:
    return _read_word_list(Path(path).read_text(encoding="utf-8"))


def normalize_text(text: str, stopwords: frozenset[str] | None = None) -> list[str]:
    """Lowercased alphanumeric tokens, stop words dropped, words stemmed.
    Numeric tokens pass through unstemmed."""
    if stopwords is None:
        stopwords = default_stopwords()
    out = []
    for token in _WORD_RE.findall(text.lower()):
        if token in stopwords:
            continue
        out.append(stem(token) if not token.isdigit() else token)
    return out
