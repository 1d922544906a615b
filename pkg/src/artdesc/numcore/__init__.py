"""Minimal differentiable numerics: float64 tensors on a reverse-mode tape,
the recurrent/attention/output layers the generation models need, Adam, and
a finite-difference gradient oracle."""

from artdesc.numcore.tensor import (
    Tensor,
    add,
    add_n,
    affine,
    backward,
    concat,
    constant,
    cross_entropy,
    dot,
    embedding,
    lstm_step,
    maximum_list,
    mlp_attention,
    mul,
    narrow,
    neg_log_pick,
    relu_t,
    scale,
    sigmoid_t,
    softmax,
    softmax_np,
    stack_scalars,
    sum_t,
    tanh_t,
    vecmat,
)
from artdesc.numcore.params import ParamStore, adam_step, scheduled_lr, uniform_init
from artdesc.numcore.gradcheck import grad_check
from artdesc.numcore.checkpoint import load_checkpoint, save_checkpoint

__all__ = [
    "ParamStore",
    "Tensor",
    "adam_step",
    "add",
    "add_n",
    "affine",
    "backward",
    "concat",
    "constant",
    "cross_entropy",
    "dot",
    "embedding",
    "grad_check",
    "load_checkpoint",
    "lstm_step",
    "maximum_list",
    "mlp_attention",
    "mul",
    "narrow",
    "neg_log_pick",
    "relu_t",
    "save_checkpoint",
    "scale",
    "scheduled_lr",
    "sigmoid_t",
    "softmax",
    "softmax_np",
    "stack_scalars",
    "sum_t",
    "tanh_t",
    "uniform_init",
    "vecmat",
]
