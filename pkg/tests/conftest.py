"""Shared fixtures and the per-criterion acceptance summary."""

import json

import numpy as np
import pytest

from synth import ENTITY_PEOPLE, ENTITY_PLACES, entity_corpus

from artdesc.corpus import save_corpus, save_feature_grid
from artdesc.corpus.vocab import build_vocab
from artdesc.decoder import DecoderConfig, TrainConfig, save_decoder_checkpoint, train_decoder
from artdesc.filler import FillerConfig, build_filler_vocab, save_filler_checkpoint, train_filler
from artdesc.retriever import KnowledgeArticle, TfIdfIndex


def write_gazetteer(path):
    lines = [f"{name}\tperson" for name in ENTITY_PEOPLE]
    lines += [f"{name}\tlocation" for name in ENTITY_PLACES]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


@pytest.fixture(scope="session")
def world(tmp_path_factory):
    """A small trained world on disk: corpus, features, checkpoints, index.

    The decoder memorizes its 8-painting corpus, so oracle-mode describe()
    reconstructs every reference description exactly.
    """
    root = tmp_path_factory.mktemp("world")
    rng = np.random.default_rng(90)
    records, vocab = entity_corpus(rng, n_records=8)

    features_dir = root / "features"
    features_dir.mkdir()
    for record in records:
        save_feature_grid(features_dir / f"{record.id}.fgrd", record.features.values)
    corpus_path = root / "corpus.jsonl"
    save_corpus(corpus_path, records)
    gazetteer_path = root / "gazetteer.tsv"
    write_gazetteer(gazetteer_path)

    dec_config = DecoderConfig(variant="parallel", vocab_size=len(vocab), feature_dim=6,
                               hidden_size=40, embed_size=24, max_len=12)
    dec_ckpt = train_decoder(records, vocab, dec_config,
                             TrainConfig(epochs=300, lr=5e-3, lr_decay_every=None,
                                         batch_size=4, seed=7))
    decoder_path = root / "decoder.ckpt"
    save_decoder_checkpoint(decoder_path, dec_ckpt)

    fvocab = build_filler_vocab(records)
    fill_config = FillerConfig(vocab_size=len(fvocab), hidden_size=16, embed_size=16,
                               type_embed_size=4)
    fill_ckpt = train_filler(records, fvocab, fill_config, epochs=25, lr=7e-3,
                             lr_decay_every=None, batch_size=8, seed=8)
    filler_path = root / "filler.ckpt"
    save_filler_checkpoint(filler_path, fill_ckpt)

    articles = [
        KnowledgeArticle(record.id + "-bio", record.id,
                         f"{record.attributes['artist']} worked in "
                         f"{record.attributes['school']} around "
                         f"{record.attributes['timeframe']}.")
        for record in records
    ]
    index_path = root / "knowledge.idx"
    TfIdfIndex.build(articles).save(index_path)
    knowledge_file = root / "knowledge.jsonl"
    knowledge_file.write_text(
        "\n".join(json.dumps({"id": a.id, "title": a.title, "body": a.body})
                  for a in articles) + "\n",
        encoding="utf-8",
    )

    config = {
        "corpus": str(corpus_path),
        "features_dir": str(features_dir),
        "gazetteer": str(gazetteer_path),
        "knowledge_file": str(knowledge_file),
        "decoder_checkpoint": str(decoder_path),
        "filler_checkpoint": str(filler_path),
        "index": str(index_path),
        "seed": 7,
        "retrieval_k": 5,
        "knowledge_mode": "reference-as-oracle",
        "decode_mode": "beam",
        "beam_size": 5,
    }
    config_path = root / "pipeline.json"
    config_path.write_text(json.dumps(config, indent=2), encoding="utf-8")
    return root, records, config, config_path


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            if getattr(report, "when", None) != "call":
                continue
            if "test_acceptance" not in report.nodeid:
                continue
            name = report.nodeid.split("::")[-1]
            rows.append((name, "PASS" if outcome == "passed" else "FAIL"))
    if not rows:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, verdict in sorted(rows):
        terminalreporter.write_line(f"{verdict}  {name}")
