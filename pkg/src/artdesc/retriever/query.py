"""Query construction from painting metadata."""

from __future__ import annotations

import logging
from functools import lru_cache
from importlib import resources
from pathlib import Path

from artdesc.corpus.types import ATTRIBUTE_KEYS

logger = logging.getLogger(__name__)


def _read_blocklist(text: str) -> frozenset[str]:
    entries = set()
    for line in text.splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            entries.add(line)
    return frozenset(entries)


@lru_cache(maxsize=1)
def default_blocklist() -> frozenset[str]:
    text = resources.files("artdesc.data").joinpath("blocklist.txt").read_text("utf-8")
    return _read_blocklist(text)


def load_blocklist(path: str | Path) -> frozenset[str]:
    return _read_blocklist(Path(path).read_text(encoding="utf-8"))


def build_query(attributes: dict[str, str], objects: list[str],
                blocklist: frozenset[str] | None = None) -> str:
    """Attribute values in the fixed order artist, type, timeframe, school,
    followed by detected object concepts not on the blocklist."""
    if blocklist is None:
        blocklist = default_blocklist()
    parts = [attributes.get(key, "").strip() for key in ATTRIBUTE_KEYS]
    parts = [p for p in parts if p]
    for concept in objects:
        concept = concept.strip()
        if concept and concept.lower() not in blocklist:
            parts.append(concept)
    query = " ".join(parts)
    if not query:
        logger.warning("built an empty retrieval query (no attributes or usable objects)")
    return query
