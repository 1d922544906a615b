"""Filler training and slot filling.

Training pairs follow the anti-copying recipe: the input is a single masked
sentence, but the candidate set is harvested from the painting's whole
description (all entity values plus typed attributes), so the model cannot
solve the task by position alone. The target for each slot is its original
entity value. Slots with no type-compatible candidate contribute no loss and
are counted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from artdesc import numcore as nc
from artdesc.corpus import MaskedSentence, PaintingRecord, Slot, tokenize
from artdesc.corpus.vocab import Vocab
from artdesc.errors import ConfigError
from artdesc.filler.candidates import ATTRIBUTE_TYPES, Candidate, CandidateSet
from artdesc.filler.encoding import encode_fill_input
from artdesc.filler.model import FillerConfig, init_filler_params, slot_scores


@dataclass
class FillPair:
    masked: list[MaskedSentence]
    candidates: CandidateSet
    targets: list[str]


@dataclass
class FillerCheckpoint:
    config: FillerConfig
    vocab: Vocab
    store: nc.ParamStore
    seed: int
    history: list[dict] = field(default_factory=list)


def record_candidates(record: PaintingRecord) -> CandidateSet:
    """Whole-paragraph candidates: typed attribute values plus every masked
    entity value of the record."""
    entries: list[Candidate] = []
    for key, etype in ATTRIBUTE_TYPES.items():
        value = record.attributes.get(key, "").strip()
        if value:
            entries.append(Candidate(value, etype, "attribute"))
    for entry in record.sentences:
        for value, etype in zip(entry.values, entry.masked.slot_types()):
            entries.append(Candidate(value, etype, "article"))
    return CandidateSet(entries)


def build_fill_pairs(records: list[PaintingRecord]) -> list[FillPair]:
    pairs: list[FillPair] = []
    for record in records:
        candidates = record_candidates(record)
        for entry in record.sentences:
            if entry.masked.slot_count() == 0:
                continue
            pairs.append(FillPair([entry.masked], candidates, list(entry.values)))
    if not pairs:
        raise ConfigError("corpus has no slot-bearing sentences to train the filler on")
    return pairs


def fill_pair_loss(
    pair: FillPair,
    params: nc.ParamStore,
    vocab: Vocab,
    config: FillerConfig,
) -> tuple[nc.Tensor | None, int, int]:
    """Sum of per-slot cross-entropies over type-compatible candidates.
    Returns (loss or None, scored slot count, skipped slot count)."""
    fill_input = encode_fill_input(pair.masked, pair.candidates, config.max_len)
    per_slot = slot_scores(fill_input, pair.candidates, params, vocab, config)
    losses: list[nc.Tensor] = []
    skipped = 0
    for scored, target, etype in zip(per_slot, pair.targets, fill_input.slot_types):
        gold = pair.candidates.find(target, etype)
        local = next((i for i, (idx, _) in enumerate(scored) if idx == gold), None)
        if gold is None or local is None or not scored:
            skipped += 1
            continue
        logits = nc.stack_scalars([score for _, score in scored])
        losses.append(nc.cross_entropy(logits, local))
    if not losses:
        return None, 0, skipped
    return nc.add_n(losses), len(losses), skipped


def train_filler(
    records: list[PaintingRecord],
    vocab: Vocab,
    config: FillerConfig,
    epochs: int,
    lr: float = 5e-4,
    lr_decay: float = 0.8,
    lr_decay_every: int | None = 10,
    betas: tuple[float, float] = (0.9, 0.999),
    eps: float = 1e-8,
    batch_size: int = 32,
    seed: int = 0,
) -> FillerCheckpoint:
    if config.vocab_size != len(vocab):
        raise ConfigError(
            f"config vocab_size {config.vocab_size} does not match vocab of {len(vocab)}"
        )
    rng = np.random.default_rng(seed)
    store = init_filler_params(config, rng)
    pairs = build_fill_pairs(records)
    order = np.arange(len(pairs))
    history: list[dict] = []
    for epoch in range(epochs):
        rng.shuffle(order)
        lr_now = nc.scheduled_lr(lr, epoch, lr_decay, lr_decay_every)
        loss_sum = 0.0
        slot_count = 0
        skipped_count = 0
        for start in range(0, len(order), batch_size):
            batch = order[start : start + batch_size]
            store.clear_grads()
            batch_losses: list[nc.Tensor] = []
            batch_slots = 0
            for idx in batch:
                loss, n_slots, skipped = fill_pair_loss(pairs[idx], store, vocab, config)
                skipped_count += skipped
                if loss is None:
                    continue
                loss_sum += loss.item()
                batch_slots += n_slots
                batch_losses.append(loss)
            if not batch_losses:
                continue
            slot_count += batch_slots
            nc.backward(nc.scale(nc.add_n(batch_losses), 1.0 / batch_slots), store)
            nc.adam_step(store, lr_now, betas, eps)
        history.append({
            "epoch": epoch,
            "lr": lr_now,
            "loss_per_slot": loss_sum / slot_count if slot_count else None,
            "skipped_slots": skipped_count,
        })
    return FillerCheckpoint(config, vocab, store, seed, history)


# ----------------------------------------------------------------------
# Inference
# ----------------------------------------------------------------------


@dataclass
class FillDecision:
    position: int
    entity_type: str
    chosen: str | None
    score: float | None
    n_compatible: int


@dataclass
class FillResult:
    tokens: list[str]  # one unit per input token (multi-word fills stay one unit)
    decisions: list[FillDecision]

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


def placeholder(etype) -> str:
    return f"[unknown-{etype.name.lower()}]"


def fill_slots(
    masked: list[MaskedSentence],
    candidates: CandidateSet,
    ckpt: FillerCheckpoint,
) -> FillResult:
    """Replace each slot with the argmax type-compatible candidate; slots with
    no compatible candidate render as a visible placeholder. Non-slot tokens
    pass through verbatim. Score ties break by candidate surface so the
    choice is independent of candidate order."""
    fill_input = encode_fill_input(masked, candidates, ckpt.config.max_len)
    per_slot = slot_scores(fill_input, candidates, ckpt.store, ckpt.vocab, ckpt.config)

    chosen: dict[int, FillDecision] = {}
    for (pos, etype), scored in zip(
        zip(fill_input.slot_positions, fill_input.slot_types), per_slot
    ):
        if not scored:
            chosen[pos] = FillDecision(pos, etype.name.lower(), None, None, 0)
            continue
        ranked = sorted(
            ((float(score.data), candidates.entries[idx].surface) for idx, score in scored),
            key=lambda t: (-t[0], t[1].lower()),
        )
        best_score, best_surface = ranked[0]
        chosen[pos] = FillDecision(pos, etype.name.lower(), best_surface,
                                   best_score, len(scored))

    out_tokens: list[str] = []
    token_pos = 0
    for sentence in masked:
        for token in sentence.tokens:
            pos = 1 + token_pos  # mirror encode_fill_input's CLS offset
            if isinstance(token, Slot):
                decision = chosen[pos]
                out_tokens.append(
                    decision.chosen if decision.chosen is not None
                    else placeholder(token.entity_type)
                )
            else:
                out_tokens.append(token.text)
            token_pos += 1
    return FillResult(out_tokens, [chosen[p] for p in fill_input.slot_positions])


def rendered_tokens(result: FillResult) -> list[str]:
    """Fully expanded token stream (multi-word fills split) for metric use."""
    out: list[str] = []
    for unit in result.tokens:
        if unit.startswith("[unknown-"):
            out.append(unit)
        else:
            out.extend(tokenize(unit))
    return out
