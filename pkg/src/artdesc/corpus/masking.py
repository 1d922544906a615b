"""Replace tagged entity spans with typed slots, and invert the replacement."""

from __future__ import annotations

from artdesc.corpus.text import tokenize
from artdesc.corpus.types import (
    SLOT_SURFACES,
    EntityType,
    MaskedSentence,
    Slot,
    Token,
    TopicLabel,
    Word,
)
from artdesc.errors import DataError


def mask_sentence(
    sentence: str,
    entities: list[tuple[tuple[int, int], EntityType]],
    topic: TopicLabel = TopicLabel.CONTEXT,
) -> tuple[MaskedSentence, list[str]]:
    """Mask entity spans to Slot tokens; return the masked sentence and the
    replaced surface values in order. unmask() inverts this on tokenized text."""
    ordered = sorted(entities, key=lambda e: e[0][0])
    prev_end = 0
    for (start, end), _ in ordered:
        if start < prev_end:
            raise DataError(f"overlapping entity spans at offset {start}")
        if start < 0 or end > len(sentence) or start >= end:
            raise DataError(f"invalid span ({start}, {end}) for sentence of length {len(sentence)}")
        prev_end = end

    tokens: list[Token] = []
    values: list[str] = []
    cursor = 0
    for (start, end), etype in ordered:
        tokens.extend(Word(t) for t in tokenize(sentence[cursor:start]))
        tokens.append(Slot(etype))
        values.append(sentence[start:end])
        cursor = end
    tokens.extend(Word(t) for t in tokenize(sentence[cursor:]))
    if not tokens:
        raise DataError("masking produced an empty sentence")
    return MaskedSentence(tokens, topic), values


def sentence_from_surfaces(surfaces: list[str],
                           topic: TopicLabel = TopicLabel.CONTEXT) -> MaskedSentence:
    """Rebuild a MaskedSentence from surface strings; slot markers like
    "[person]" become typed slots."""
    tokens: list[Token] = []
    for surface in surfaces:
        etype = SLOT_SURFACES.get(surface)
        tokens.append(Slot(etype) if etype is not None else Word(surface))
    return MaskedSentence(tokens, topic)


def unmask(masked: MaskedSentence, values: list[str]) -> list[str]:
    """Substitute slot values back in; result equals tokenize(original)."""
    if masked.slot_count() != len(values):
        raise DataError(
            f"{masked.slot_count()} slots but {len(values)} values to substitute"
        )
    out: list[str] = []
    it = iter(values)
    for token in masked.tokens:
        if isinstance(token, Slot):
            out.extend(tokenize(next(it)))
        else:
            out.append(token.text)
    return out
