"""Decoder checkpoint files: numcore container plus variant/config/vocab
metadata. Loading verifies the stored digests and fails loudly on mismatch."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from artdesc.corpus.vocab import Vocab
from artdesc.decoder.config import DecoderConfig
from artdesc.decoder.model import init_decoder_params
from artdesc.decoder.train import DecoderCheckpoint
from artdesc.errors import ConfigError
from artdesc.numcore import load_checkpoint, save_checkpoint
from artdesc.numcore.checkpoint import digest_of


def save_decoder_checkpoint(path: str | Path, ckpt: DecoderCheckpoint) -> None:
    meta = {
        "kind": "decoder",
        "variant": ckpt.config.variant,
        "config": ckpt.config.to_dict(),
        "vocab_tokens": ckpt.vocab.tokens,
        "vocab_digest": ckpt.vocab.digest(),
        "seed": ckpt.seed,
        "final_nll_per_token": ckpt.history[-1]["nll_per_token"] if ckpt.history else None,
    }
    save_checkpoint(path, ckpt.store.state_arrays(), digest_of(ckpt.config.to_dict()), meta)


def load_decoder_checkpoint(path: str | Path,
                            expected_vocab: Vocab | None = None) -> DecoderCheckpoint:
    arrays, digest, meta, _ = load_checkpoint(path)
    if meta.get("kind") != "decoder":
        raise ConfigError(f"{path} is not a decoder checkpoint (kind={meta.get('kind')!r})")
    config = DecoderConfig.from_dict(meta["config"])
    if digest_of(config.to_dict()) != digest:
        raise ConfigError(f"{path}: config digest mismatch; file corrupt or edited")
    vocab = Vocab(meta["vocab_tokens"])
    if vocab.digest() != meta["vocab_digest"]:
        raise ConfigError(f"{path}: vocab digest mismatch; file corrupt or edited")
    if expected_vocab is not None and expected_vocab.digest() != vocab.digest():
        raise ConfigError(f"{path}: checkpoint vocab differs from the supplied vocab")
    store = init_decoder_params(config, np.random.default_rng(0))
    store.load_state(arrays)
    return DecoderCheckpoint(config, vocab, store, meta.get("seed", 0), [])
