"""Knowledge filling: candidate extraction from retrieved articles and
attributes, fill-input encoding, and the trained slot scorer."""

from artdesc.filler.candidates import ATTRIBUTE_TYPES, Candidate, CandidateSet, extract_candidates
from artdesc.filler.ckpt import load_filler_checkpoint, save_filler_checkpoint
from artdesc.filler.encoding import (
    CLS,
    SEP,
    FillInput,
    build_filler_vocab,
    decode_fill_input,
    encode_fill_input,
)
from artdesc.filler.model import FillerConfig, init_filler_params, slot_scores
from artdesc.filler.train import (
    FillDecision,
    FillPair,
    FillResult,
    FillerCheckpoint,
    build_fill_pairs,
    fill_pair_loss,
    fill_slots,
    placeholder,
    record_candidates,
    rendered_tokens,
    train_filler,
)

__all__ = [
    "ATTRIBUTE_TYPES",
    "CLS",
    "Candidate",
    "CandidateSet",
    "FillDecision",
    "FillInput",
    "FillPair",
    "FillResult",
    "FillerCheckpoint",
    "FillerConfig",
    "SEP",
    "build_fill_pairs",
    "build_filler_vocab",
    "decode_fill_input",
    "encode_fill_input",
    "extract_candidates",
    "fill_pair_loss",
    "fill_slots",
    "init_filler_params",
    "load_filler_checkpoint",
    "placeholder",
    "record_candidates",
    "rendered_tokens",
    "save_filler_checkpoint",
    "slot_scores",
    "train_filler",
]
