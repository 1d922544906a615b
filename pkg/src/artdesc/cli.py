"""Command-line interface.

Subcommands: preprocess, train-decoder, train-filler, index, retrieve,
describe, evaluate, eval-recall. Exit codes: 0 success, 1 usage error,
2 data/config error, 3 missing artifact. Logs are line-delimited JSON on
stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from artdesc import __version__
from artdesc.corpus import (
    Gazetteer,
    TOPIC_ORDER,
    TopicLabel,
    load_corpus,
    mask_sentence,
    sentence_from_surfaces,
    split_sentences,
    tag_entities,
    tokenize,
)
from artdesc.corpus.vocab import build_vocab
from artdesc.decoder import (
    DecoderConfig,
    TrainConfig,
    save_decoder_checkpoint,
    train_conditional,
    train_decoder,
)
from artdesc.errors import ArtdescError, ConfigError, DataError, MissingArtifactError
from artdesc.filler import (
    FillerConfig,
    build_filler_vocab,
    extract_candidates,
    fill_slots,
    load_filler_checkpoint,
    rendered_tokens,
    save_filler_checkpoint,
    train_filler,
)
from artdesc.pipeline import Pipeline, PipelineConfig, render_evaluation, report_to_json
from artdesc.retriever import (
    TfIdfIndex,
    build_query,
    default_blocklist,
    eval_recall,
    load_annotations,
    load_blocklist,
    load_stopwords,
    read_articles_dir,
    read_articles_jsonl,
)

logger = logging.getLogger("artdesc")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_MISSING = 3


class _JsonLineFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        payload = {
            "ts": round(record.created, 3),
            "level": record.levelname.lower(),
            "logger": record.name,
            "event": record.getMessage(),
        }
        return json.dumps(payload, ensure_ascii=False)


def _setup_logging(verbose: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(_JsonLineFormatter())
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(logging.DEBUG if verbose else logging.INFO)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------


def cmd_preprocess(args) -> int:
    gazetteer = Gazetteer.from_file(args.gazetteer)
    out_lines = []
    for lineno, line in enumerate(Path(args.input).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        raw = json.loads(line)
        if "sentences" in raw:
            sentence_specs = [(s["text"], s.get("topic")) for s in raw["sentences"]]
        else:
            sentence_specs = [(text, None) for text in split_sentences(raw.get("comment", ""))]
        sentences = []
        for text, topic in sentence_specs:
            if len(tokenize(text)) < args.min_sentence_tokens:
                logger.info("dropping short sentence in '%s': %r", raw["id"], text)
                continue
            spans = tag_entities(text, gazetteer)
            _, values = mask_sentence(text, spans)
            types = [etype.name.lower() for _, etype in sorted(spans, key=lambda s: s[0][0])]
            sentences.append({
                "text": text,
                "topic": topic,
                "entities": [{"value": v, "type": t} for v, t in zip(values, types)],
            })
        out_lines.append(json.dumps({
            "id": raw["id"],
            "sentences": sentences,
            "attributes": raw.get("attributes", {}),
            "objects": raw.get("objects", []),
            "reference": raw.get("reference", raw.get("comment", "")),
        }, ensure_ascii=False))
    Path(args.out).write_text("\n".join(out_lines) + "\n", encoding="utf-8")
    logger.info("preprocessed %d records into %s", len(out_lines), args.out)
    return EXIT_OK


def _sniff_feature_dim(records) -> int:
    for record in records:
        if record.features is not None:
            return record.features.feature_dim
    raise MissingArtifactError("no feature grids found; supply --features-dir")


def cmd_train_decoder(args) -> int:
    records = load_corpus(args.corpus, args.features_dir)
    masked = [e.masked for r in records for e in r.sentences]
    vocab = build_vocab(masked, min_freq=args.min_freq)
    config = DecoderConfig(
        variant=args.variant,
        vocab_size=len(vocab),
        feature_dim=_sniff_feature_dim(records),
        hidden_size=args.hidden_size,
        embed_size=args.embed_size,
        topic_embed_size=args.topic_embed_size,
        max_len=args.max_len,
    )
    tcfg = TrainConfig(
        epochs=args.epochs, lr=args.lr, lr_decay=args.lr_decay,
        lr_decay_every=args.lr_decay_every, batch_size=args.batch_size, seed=args.seed,
    )
    start = time.perf_counter()
    if args.variant == "conditional":
        ckpt = train_conditional(records, vocab, config, tcfg)
    else:
        ckpt = train_decoder(records, vocab, config, tcfg)
    for entry in ckpt.history:
        logger.info("epoch %d: nll/token=%.4f lr=%.2e", entry["epoch"],
                    entry["nll_per_token"], entry["lr"])
    save_decoder_checkpoint(args.out, ckpt)
    logger.info("trained %s decoder in %.1fs -> %s", args.variant,
                time.perf_counter() - start, args.out)
    return EXIT_OK


def cmd_train_filler(args) -> int:
    records = load_corpus(args.corpus)
    vocab = build_filler_vocab(records, min_freq=args.min_freq)
    config = FillerConfig(
        vocab_size=len(vocab),
        hidden_size=args.hidden_size,
        embed_size=args.embed_size,
        type_embed_size=args.type_embed_size,
        max_len=args.max_input_len,
    )
    ckpt = train_filler(
        records, vocab, config, epochs=args.epochs, lr=args.lr,
        lr_decay=args.lr_decay, lr_decay_every=args.lr_decay_every,
        batch_size=args.batch_size, seed=args.seed,
    )
    for entry in ckpt.history:
        logger.info("epoch %d: loss/slot=%s skipped=%d", entry["epoch"],
                    entry["loss_per_slot"], entry["skipped_slots"])
    save_filler_checkpoint(args.out, ckpt)
    logger.info("trained filler -> %s", args.out)
    return EXIT_OK


def cmd_index(args) -> int:
    if args.knowledge_dir:
        articles = read_articles_dir(args.knowledge_dir)
    else:
        articles = read_articles_jsonl(args.knowledge_file)
    stopwords = load_stopwords(args.stoplist) if args.stoplist else None
    index = TfIdfIndex.build(articles, stopwords)
    index.save(args.out)
    logger.info("indexed %d articles, %d terms -> %s",
                index.n_docs, len(index.terms), args.out)
    return EXIT_OK


def cmd_retrieve(args) -> int:
    index = TfIdfIndex.load(args.index)
    if args.query is not None:
        query = args.query
    else:
        meta = json.loads(Path(args.meta).read_text(encoding="utf-8"))
        blocklist = load_blocklist(args.blocklist) if args.blocklist else default_blocklist()
        query = build_query(meta.get("attributes", {}), meta.get("objects", []), blocklist)
    for article_id, score in index.rank(query, k=args.k):
        print(json.dumps({"article_id": article_id, "score": score}))
    return EXIT_OK


def cmd_describe(args) -> int:
    config = PipelineConfig.from_file(args.config)
    if args.beam_size is not None:
        config.beam_size = args.beam_size
    if args.max_len is not None:
        config.max_decode_len = args.max_len
    if args.mode is not None:
        config.decode_mode = args.mode
    if args.seed is not None:
        config.seed = args.seed
    topics = (TopicLabel.from_name(args.topic),) if args.topic else TOPIC_ORDER
    pipeline = Pipeline(config)
    if args.painting_id:
        reports = [pipeline.describe(pipeline.record_by_id(args.painting_id), topics)]
    else:
        reports = [pipeline.describe(record, topics) for record in pipeline.records]
    payload = "\n".join(report_to_json(r) for r in reports) + "\n"
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
        logger.info("wrote %d describe reports to %s", len(reports), args.out)
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def cmd_fill(args) -> int:
    """Fill slots in masked sentences using articles and attributes."""
    ckpt = load_filler_checkpoint(args.ckpt)
    gazetteer = Gazetteer.from_file(args.gazetteer)
    masked_spec = json.loads(Path(args.masked).read_text(encoding="utf-8"))
    masked = [
        sentence_from_surfaces(
            item["tokens"],
            TopicLabel.from_name(item["topic"]) if item.get("topic") else TopicLabel.CONTEXT,
        )
        for item in masked_spec
    ]
    articles = read_articles_jsonl(args.articles) if args.articles else []
    attributes = (
        json.loads(Path(args.attrs).read_text(encoding="utf-8")) if args.attrs else {}
    )
    candidates = extract_candidates(articles, attributes, gazetteer)
    result = fill_slots(masked, candidates, ckpt)
    print(json.dumps({
        "description": " ".join(rendered_tokens(result)),
        "tokens": result.tokens,
        "slots": [
            {"position": d.position, "type": d.entity_type, "chosen": d.chosen,
             "score": d.score, "n_compatible": d.n_compatible}
            for d in result.decisions
        ],
    }, ensure_ascii=False))
    return EXIT_OK


def cmd_evaluate(args) -> int:
    pipeline = Pipeline(PipelineConfig.from_file(args.config))
    reports = []
    for line in Path(args.reports).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line:
            reports.append(json.loads(line))
    report = pipeline.evaluate(reports)
    if args.out:
        Path(args.out).write_text(report_to_json(report) + "\n", encoding="utf-8")
    print(render_evaluation(report))
    return EXIT_OK


def cmd_eval_recall(args) -> int:
    index = TfIdfIndex.load(args.index)
    records = load_corpus(args.corpus)
    annotations = load_annotations(args.annotations)
    blocklist = load_blocklist(args.blocklist) if args.blocklist else default_blocklist()
    ks = tuple(int(k) for k in args.ks.split(","))
    rankings = {}
    for record in records:
        query = build_query(record.attributes, record.objects, blocklist)
        ranked = index.rank(query, k=max(ks))
        rankings[record.id] = [article_id for article_id, _ in ranked]
    report = eval_recall(rankings, annotations, ks)
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="artdesc",
                     description="Multi-topic painting description pipeline.")
    parser.add_argument("--version", action="version", version=f"artdesc {__version__}")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="raw comments -> masked corpus JSONL")
    p.add_argument("--input", required=True)
    p.add_argument("--gazetteer", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--min-sentence-tokens", type=int, default=1)
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("train-decoder", help="train a masked-sentence decoder")
    p.add_argument("--corpus", required=True)
    p.add_argument("--features-dir", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--variant", choices=("baseline", "parallel", "conditional"),
                   default="parallel")
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--hidden-size", type=int, default=64)
    p.add_argument("--embed-size", type=int, default=64)
    p.add_argument("--topic-embed-size", type=int, default=8)
    p.add_argument("--max-len", type=int, default=20)
    p.add_argument("--min-freq", type=int, default=1)
    p.add_argument("--lr", type=float, default=5e-4)
    p.add_argument("--lr-decay", type=float, default=0.8)
    p.add_argument("--lr-decay-every", type=int, default=10)
    p.add_argument("--batch-size", type=int, default=32)
    p.set_defaults(func=cmd_train_decoder)

    p = sub.add_parser("train-filler", help="train the slot filler")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--hidden-size", type=int, default=32)
    p.add_argument("--embed-size", type=int, default=32)
    p.add_argument("--type-embed-size", type=int, default=8)
    p.add_argument("--max-input-len", type=int, default=120)
    p.add_argument("--min-freq", type=int, default=1)
    p.add_argument("--lr", type=float, default=5e-4)
    p.add_argument("--lr-decay", type=float, default=0.8)
    p.add_argument("--lr-decay-every", type=int, default=10)
    p.add_argument("--batch-size", type=int, default=32)
    p.set_defaults(func=cmd_train_filler)

    p = sub.add_parser("index", help="build the TF-IDF knowledge index")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--knowledge-dir")
    group.add_argument("--knowledge-file")
    p.add_argument("--out", required=True)
    p.add_argument("--stoplist")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("retrieve", help="rank articles for a query")
    p.add_argument("--index", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--query")
    group.add_argument("--meta", help="JSON file with attributes/objects")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--blocklist")
    p.set_defaults(func=cmd_retrieve)

    p = sub.add_parser("describe", help="run the full pipeline for paintings")
    p.add_argument("--config", required=True)
    p.add_argument("--painting-id")
    p.add_argument("--topic", choices=("content", "form", "context"),
                   help="generate only this topic's sentence")
    p.add_argument("--mode", choices=("greedy", "beam"))
    p.add_argument("--beam-size", type=int)
    p.add_argument("--max-len", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("fill", help="fill slots in masked sentences")
    p.add_argument("--masked", required=True,
                   help="JSON list of {tokens, topic} masked sentences")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--gazetteer", required=True)
    p.add_argument("--articles", help="JSONL of knowledge articles")
    p.add_argument("--attrs", help="JSON attributes map")
    p.set_defaults(func=cmd_fill)

    p = sub.add_parser("evaluate", help="score describe reports against references")
    p.add_argument("--config", required=True)
    p.add_argument("--reports", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("eval-recall", help="R@k of the retriever against annotations")
    p.add_argument("--index", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--ks", default="1,5,10")
    p.add_argument("--blocklist")
    p.set_defaults(func=cmd_eval_recall)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    _setup_logging(args.verbose)
    try:
        return args.func(args)
    except MissingArtifactError as exc:
        logger.error("missing artifact: %s", exc)
        return EXIT_MISSING
    except (DataError, ConfigError) as exc:
        logger.error("data error: %s", exc)
        return EXIT_DATA
    except ArtdescError as exc:
        logger.error("%s", exc)
        return EXIT_DATA
    except FileNotFoundError as exc:
        logger.error("missing file: %s", exc)
        return EXIT_MISSING


if __name__ == "__main__":
    sys.exit(main())
