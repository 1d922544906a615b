"""Topic classifier: convolution windows over per-step word embeddings,
max-pool over time, linear to 3 topic logits.

During joint training the classifier consumes the decoder's per-step output
distributions through their expected embeddings (sum_w p(w) * E[w]), so the
whole objective stays differentiable without sampling. On discrete token
sequences the same network runs on plain embedding rows.
"""

from __future__ import annotations

import numpy as np

from artdesc import numcore as nc
from artdesc.corpus import TopicLabel
from artdesc.corpus.vocab import Vocab
from artdesc.decoder.config import DecoderConfig


def init_classifier_params(store: nc.ParamStore, config: DecoderConfig,
                           rng: np.random.Generator) -> None:
    ec = config.classifier_embed_size
    f = config.classifier_filters
    store.add("cls.embed", nc.uniform_init(rng, (config.vocab_size, ec)))
    for n in config.classifier_windows:
        store.add(f"cls.conv{n}.w", nc.uniform_init(rng, (f, n * ec)))
        store.add(f"cls.conv{n}.b", np.zeros(f))
    store.add("cls.out.w", nc.uniform_init(rng, (len(TopicLabel), f * len(config.classifier_windows))))
    store.add("cls.out.b", np.zeros(len(TopicLabel)))


def _logits_from_embeddings(emb_seq: list[nc.Tensor], params: nc.ParamStore,
                            config: DecoderConfig) -> nc.Tensor:
    # pad with the <pad> embedding so every window size has >=1 position
    needed = max(config.classifier_windows)
    emb_seq = list(emb_seq)
    while len(emb_seq) < needed:
        emb_seq.append(nc.embedding(params["cls.embed"], Vocab.pad))
    pooled = []
    for n in config.classifier_windows:
        feats = []
        for j in range(len(emb_seq) - n + 1):
            window = nc.concat(emb_seq[j : j + n])
            feats.append(
                nc.relu_t(nc.affine(params[f"cls.conv{n}.w"], window, params[f"cls.conv{n}.b"]))
            )
        pooled.append(nc.maximum_list(feats))
    return nc.affine(params["cls.out.w"], nc.concat(pooled), params["cls.out.b"])


def classify_distributions(probs: list[nc.Tensor], params: nc.ParamStore,
                           config: DecoderConfig) -> nc.Tensor:
    """Topic logits from per-step word distributions (continuous path)."""
    emb_seq = [nc.vecmat(p, params["cls.embed"]) for p in probs]
    return _logits_from_embeddings(emb_seq, params, config)


def classify_tokens(token_ids: list[int], params: nc.ParamStore,
                    config: DecoderConfig) -> nc.Tensor:
    """Topic logits from a discrete token sequence."""
    emb_seq = [nc.embedding(params["cls.embed"], i) for i in token_ids]
    return _logits_from_embeddings(emb_seq, params, config)


def predict_topic(token_ids: list[int], params: nc.ParamStore,
                  config: DecoderConfig) -> TopicLabel:
    logits = classify_tokens(token_ids, params, config)
    return TopicLabel(int(np.argmax(logits.data)))
