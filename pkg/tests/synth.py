"""Synthetic corpora shared by unit and acceptance tests."""

from artdesc.corpus import (
    EntityType,
    FeatureGrid,
    MaskedSentence,
    PaintingRecord,
    SentenceEntry,
    Slot,
    TopicLabel,
    Word,
    build_vocab,
)

TOPIC_WORDS = {
    TopicLabel.CONTENT: [f"content{i}" for i in range(10)],
    TopicLabel.FORM: [f"form{i}" for i in range(10)],
    TopicLabel.CONTEXT: [f"context{i}" for i in range(10)],
}


def random_grid(rng, n_loc=4, feat=6):
    return FeatureGrid(rng.normal(size=(n_loc, feat)))


def _entry_from_words(words, topic):
    tokens = [Word(w) for w in words]
    return SentenceEntry(" ".join(words), MaskedSentence(tokens, topic), [], True)


def memorization_corpus(rng, n_records=20, vocab_words=15, min_len=4, max_len=8,
                        n_loc=4, feat=6):
    """Distinct single-sentence paintings with random grids; the decoder must
    map each grid to its sentence."""
    words = [f"w{i}" for i in range(vocab_words)]
    seen = set()
    records = []
    while len(records) < n_records:
        length = int(rng.integers(min_len, max_len + 1))
        sent = tuple(words[int(rng.integers(vocab_words))] for _ in range(length))
        if sent in seen:
            continue
        seen.add(sent)
        records.append(
            PaintingRecord(
                id=f"p{len(records):03d}",
                sentences=[_entry_from_words(list(sent), TopicLabel.CONTENT)],
                features=random_grid(rng, n_loc, feat),
            )
        )
    vocab = build_vocab([e.masked for r in records for e in r.sentences])
    return records, vocab


def topic_disjoint_corpus(rng, n_records=12, min_len=3, max_len=6, n_loc=4, feat=6):
    """One sentence per topic per painting, with disjoint per-topic vocabularies."""
    records = []
    for i in range(n_records):
        entries = []
        for topic in TopicLabel:
            words = TOPIC_WORDS[topic]
            length = int(rng.integers(min_len, max_len + 1))
            chosen = [words[int(rng.integers(len(words)))] for _ in range(length)]
            entries.append(_entry_from_words(chosen, topic))
        records.append(
            PaintingRecord(id=f"p{i:03d}", sentences=entries,
                           features=random_grid(rng, n_loc, feat))
        )
    vocab = build_vocab([e.masked for r in records for e in r.sentences])
    return records, vocab


def slotted_entry(words_and_slots, values, topic):
    """Entry from a mixed token template, e.g. ['made', 'by', Slot(PERSON)]."""
    tokens = []
    raw_parts = []
    it = iter(values)
    for item in words_and_slots:
        if isinstance(item, Slot):
            tokens.append(item)
            raw_parts.append(next(it))
        else:
            tokens.append(Word(item))
            raw_parts.append(item)
    return SentenceEntry(" ".join(raw_parts), MaskedSentence(tokens, topic), list(values), True)


ENTITY_PEOPLE = ["vasari", "rubens", "vermeer", "goya"]
ENTITY_YEARS = ["1502", "1640", "1665", "1820"]
ENTITY_PLACES = ["delft", "madrid", "florence", "utrecht"]
ENTITY_ADJECTIVES = ["quiet", "vivid", "dark", "grand", "small", "bright"]


def entity_corpus(rng, n_records=10, n_loc=4, feat=6):
    """Paintings with entity-bearing sentences per topic; sentence wording
    varies per record so decoder memorization is non-trivial, and entity
    values come from small pools so the filler can learn them."""
    records = []
    for i in range(n_records):
        person = ENTITY_PEOPLE[int(rng.integers(len(ENTITY_PEOPLE)))]
        year = ENTITY_YEARS[int(rng.integers(len(ENTITY_YEARS)))]
        place = ENTITY_PLACES[int(rng.integers(len(ENTITY_PLACES)))]
        adj_a = ENTITY_ADJECTIVES[int(rng.integers(len(ENTITY_ADJECTIVES)))]
        adj_b = ENTITY_ADJECTIVES[int(rng.integers(len(ENTITY_ADJECTIVES)))]
        entries = [
            slotted_entry(
                ["a", adj_a, "scene", "painted", "by", Slot(EntityType.PERSON), "."],
                [person], TopicLabel.CONTENT),
            slotted_entry(
                [adj_b, "brushwork", "throughout", "."],
                [], TopicLabel.FORM),
            slotted_entry(
                ["made", "in", Slot(EntityType.LOCATION), "in", Slot(EntityType.DATE), "."],
                [place, year], TopicLabel.CONTEXT),
        ]
        records.append(
            PaintingRecord(
                id=f"e{i:03d}",
                sentences=entries,
                attributes={"artist": person, "school": place, "timeframe": year, "type": "scene"},
                features=random_grid(rng, n_loc, feat),
            )
        )
    vocab = build_vocab([e.masked for r in records for e in r.sentences])
    return records, vocab


def entity_gazetteer():
    from artdesc.corpus import Gazetteer

    entries = {name: EntityType.PERSON for name in ENTITY_PEOPLE}
    entries.update({name: EntityType.LOCATION for name in ENTITY_PLACES})
    return Gazetteer(entries)
