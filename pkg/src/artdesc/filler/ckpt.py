"""Filler checkpoint files."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from artdesc.corpus.vocab import Vocab
from artdesc.errors import ConfigError
from artdesc.filler.model import FillerConfig, init_filler_params
from artdesc.filler.train import FillerCheckpoint
from artdesc.numcore import load_checkpoint, save_checkpoint
from artdesc.numcore.checkpoint import digest_of


def save_filler_checkpoint(path: str | Path, ckpt: FillerCheckpoint) -> None:
    meta = {
        "kind": "filler",
        "config": ckpt.config.to_dict(),
        "vocab_tokens": ckpt.vocab.tokens,
        "vocab_digest": ckpt.vocab.digest(),
        "seed": ckpt.seed,
    }
    save_checkpoint(path, ckpt.store.state_arrays(), digest_of(ckpt.config.to_dict()), meta)


def load_filler_checkpoint(path: str | Path) -> FillerCheckpoint:
    arrays, digest, meta, _ = load_checkpoint(path)
    if meta.get("kind") != "filler":
        raise ConfigError(f"{path} is not a filler checkpoint (kind={meta.get('kind')!r})")
    config = FillerConfig.from_dict(meta["config"])
    if digest_of(config.to_dict()) != digest:
        raise ConfigError(f"{path}: config digest mismatch; file corrupt or edited")
    vocab = Vocab(meta["vocab_tokens"])
    if vocab.digest() != meta["vocab_digest"]:
        raise ConfigError(f"{path}: vocab digest mismatch; file corrupt or edited")
    store = init_filler_params(config, np.random.default_rng(0))
    store.load_state(arrays)
    return FillerCheckpoint(config, vocab, store, meta.get("seed", 0), [])
