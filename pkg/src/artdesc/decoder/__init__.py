"""Topic-conditioned masked sentence generation: baseline, parallel, and
conditional decoders with a TextCNN-style topic classifier."""

from artdesc.decoder.ckpt import load_decoder_checkpoint, save_decoder_checkpoint
from artdesc.decoder.classifier import classify_distributions, classify_tokens, predict_topic
from artdesc.decoder.config import VARIANTS, DecoderConfig, TrainConfig
from artdesc.decoder.generate import beam_decode, compose_description, generate, greedy_decode
from artdesc.decoder.model import (
    attend,
    decode_logits,
    decode_step,
    decoder_prefixes,
    init_decoder_params,
    init_state,
    sub_prefix,
    topic_embedding_index,
)
from artdesc.decoder.train import (
    DecoderCheckpoint,
    TrainingItem,
    build_training_items,
    sequence_loss,
    train_conditional,
    train_decoder,
)

__all__ = [
    "DecoderCheckpoint",
    "DecoderConfig",
    "TrainConfig",
    "TrainingItem",
    "VARIANTS",
    "attend",
    "beam_decode",
    "build_training_items",
    "classify_distributions",
    "classify_tokens",
    "compose_description",
    "decode_logits",
    "decode_step",
    "decoder_prefixes",
    "generate",
    "greedy_decode",
    "init_decoder_params",
    "init_state",
    "load_decoder_checkpoint",
    "predict_topic",
    "save_decoder_checkpoint",
    "sequence_loss",
    "sub_prefix",
    "topic_embedding_index",
    "train_conditional",
    "train_decoder",
]
