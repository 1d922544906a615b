"""Teacher-forced decoder training.

Ground-truth construction: the baseline decoder trains on the whole masked
description; the parallel and conditional decoders train on per-topic
sequences built by appending the same-topic sentences of each painting. A
painting without sentences for some topic simply contributes no loss for that
topic. Sentences whose topic annotation is absent never enter topic training.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from artdesc import numcore as nc
from artdesc.corpus import FeatureGrid, PaintingRecord, TopicLabel
from artdesc.corpus.vocab import Vocab
from artdesc.decoder.classifier import classify_distributions
from artdesc.decoder.config import DecoderConfig, TrainConfig
from artdesc.decoder.model import (
    attend,
    decode_logits,
    init_decoder_params,
    init_state,
    sub_prefix,
    topic_embedding_index,
)
from artdesc.errors import ConfigError


@dataclass
class DecoderCheckpoint:
    config: DecoderConfig
    vocab: Vocab
    store: nc.ParamStore
    seed: int
    history: list[dict] = field(default_factory=list)


@dataclass
class TrainingItem:
    grid: FeatureGrid
    topic: TopicLabel | None  # None for the baseline variant
    token_ids: list[int]  # <s> ... </s>


def build_training_items(records: list[PaintingRecord], vocab: Vocab,
                         variant: str) -> list[TrainingItem]:
    items: list[TrainingItem] = []
    for record in records:
        if record.features is None:
            raise ConfigError(f"painting '{record.id}' has no feature grid")
        if variant == "baseline":
            tokens: list[int] = []
            for entry in record.sentences:
                tokens.extend(vocab.encode(entry.masked))
            if tokens:
                items.append(TrainingItem(record.features, None,
                                          [vocab.start] + tokens + [vocab.end]))
        else:
            for topic in TopicLabel:
                tokens = []
                for entry in record.sentences:
                    if entry.topic_labeled and entry.masked.topic == topic:
                        tokens.extend(vocab.encode(entry.masked))
                if tokens:
                    items.append(TrainingItem(record.features, topic,
                                              [vocab.start] + tokens + [vocab.end]))
    if not items:
        raise ConfigError("corpus yields no training sequences")
    return items


def sequence_loss(
    grid: FeatureGrid,
    token_ids: list[int],
    params: nc.ParamStore,
    prefix: str,
    topic_idx: int | None = None,
    collect_probs: bool = False,
) -> tuple[nc.Tensor, int, list[nc.Tensor]]:
    """Teacher-forced NLL summed over transitions; optionally also the
    per-step output distributions for the topic classifier."""
    state = init_state(grid, params, prefix)
    losses: list[nc.Tensor] = []
    probs: list[nc.Tensor] = []
    for prev, nxt in zip(token_ids[:-1], token_ids[1:]):
        z, _ = attend(grid, state[0], params, prefix)
        state, logits = decode_logits(z, state, prev, params, prefix, topic_idx)
        if collect_probs:
            p = nc.softmax(logits)
            probs.append(p)
            losses.append(nc.neg_log_pick(p, nxt))
        else:
            losses.append(nc.cross_entropy(logits, nxt))
    return nc.add_n(losses), len(losses), probs


def _validate(records: list[PaintingRecord], vocab: Vocab, config: DecoderConfig) -> None:
    if not records:
        raise ConfigError("empty corpus")
    if config.vocab_size != len(vocab):
        raise ConfigError(
            f"config vocab_size {config.vocab_size} does not match vocab of {len(vocab)} tokens"
        )
    for record in records:
        if record.features is not None and record.features.feature_dim != config.feature_dim:
            raise ConfigError(
                f"painting '{record.id}' features have dim "
                f"{record.features.feature_dim}, config expects {config.feature_dim}"
            )


def _train(records: list[PaintingRecord], vocab: Vocab, config: DecoderConfig,
           tcfg: TrainConfig, classifier_weight: float) -> DecoderCheckpoint:
    _validate(records, vocab, config)
    rng = np.random.default_rng(tcfg.seed)
    store = init_decoder_params(config, rng)
    items = build_training_items(records, vocab, config.variant)
    order = np.arange(len(items))
    use_classifier = classifier_weight != 0.0 and config.variant == "conditional"

    history: list[dict] = []
    for epoch in range(tcfg.epochs):
        rng.shuffle(order)
        lr = nc.scheduled_lr(tcfg.lr, epoch, tcfg.lr_decay, tcfg.lr_decay_every)
        nll_sum = 0.0
        ce_sum = 0.0
        token_count = 0
        for start in range(0, len(order), tcfg.batch_size):
            batch = order[start : start + tcfg.batch_size]
            store.clear_grads()
            batch_losses: list[nc.Tensor] = []
            batch_tokens = 0
            for idx in batch:
                item = items[idx]
                prefix = sub_prefix(config.variant, item.topic)
                topic_idx = topic_embedding_index(config.variant, item.topic)
                nll, n_tokens, probs = sequence_loss(
                    item.grid, item.token_ids, store, prefix, topic_idx,
                    collect_probs=use_classifier,
                )
                nll_sum += nll.item()
                batch_tokens += n_tokens
                loss = nll
                if use_classifier:
                    # classify the word steps (the final step predicts </s>)
                    word_probs = probs[:-1] if len(probs) > 1 else probs
                    cls_logits = classify_distributions(word_probs, store, config)
                    ce = nc.cross_entropy(cls_logits, int(item.topic))
                    ce_sum += ce.item()
                    loss = nc.add(loss, nc.scale(ce, classifier_weight))
                batch_losses.append(loss)
            token_count += batch_tokens
            batch_loss = nc.scale(nc.add_n(batch_losses), 1.0 / batch_tokens)
            nc.backward(batch_loss, store)
            nc.adam_step(store, lr, tcfg.betas, tcfg.eps)
        entry = {"epoch": epoch, "lr": lr, "nll_per_token": nll_sum / token_count}
        if use_classifier:
            entry["classifier_ce_per_item"] = ce_sum / len(items)
        history.append(entry)
    return DecoderCheckpoint(config, vocab, store, tcfg.seed, history)


def train_decoder(records: list[PaintingRecord], vocab: Vocab,
                  config: DecoderConfig, tcfg: TrainConfig) -> DecoderCheckpoint:
    """Pure teacher-forced NLL training for any variant."""
    return _train(records, vocab, config, tcfg, classifier_weight=0.0)


def train_conditional(records: list[PaintingRecord], vocab: Vocab,
                      config: DecoderConfig, tcfg: TrainConfig) -> DecoderCheckpoint:
    """Joint objective: NLL plus topic-classifier cross-entropy on the
    decoder's output distributions (continuous approximation)."""
    if config.variant != "conditional":
        raise ConfigError("train_conditional requires the conditional variant")
    return _train(records, vocab, config, tcfg,
                  classifier_weight=tcfg.classifier_loss_weight)
