"""Central-difference gradient oracle for everything built on the tape."""

from __future__ import annotations

from typing import Callable

import numpy as np

from artdesc.errors import DataError
from artdesc.numcore.params import ParamStore
from artdesc.numcore.tensor import Tensor, backward


def grad_check(
    loss_fn: Callable[[], Tensor],
    params: ParamStore,
    epsilon: float = 1e-4,
) -> float:
    """Max relative error between analytic gradients and central differences.

    loss_fn must rebuild the forward graph from the current parameter values
    and be deterministic; two baseline evaluations that disagree raise
    DataError. Relative error per element is
    |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
    """
    if epsilon <= 0:
        raise ValueError(f"grad_check: epsilon must be positive, got {epsilon}")

    base_a = loss_fn().item()
    base_b = loss_fn().item()
    if base_a != base_b:
        raise DataError(
            f"grad_check: loss_fn is not deterministic ({base_a!r} != {base_b!r})"
        )

    params.clear_grads()
    backward(loss_fn(), params)
    analytic = {name: params[name].grad.copy() for name in params.names()}

    worst = 0.0
    for name in params.names():
        data = params[name].data
        flat = data.reshape(-1)
        grad_flat = analytic[name].reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + epsilon
            f_plus = loss_fn().item()
            flat[i] = orig - epsilon
            f_minus = loss_fn().item()
            flat[i] = orig
            numeric = (f_plus - f_minus) / (2.0 * epsilon)
            a = grad_flat[i]
            denom = max(abs(a), abs(numeric), 1e-8)
            worst = max(worst, abs(a - numeric) / denom)
    return worst


def finite_difference_grads(
    loss_fn: Callable[[], float],
    arrays: dict[str, np.ndarray],
    epsilon: float = 1e-4,
) -> dict[str, np.ndarray]:
    """Central-difference gradients of a plain-float loss over raw arrays.

    Independent of the tape; used by tests that need a from-scratch oracle.
    """
    grads = {}
    for name, data in arrays.items():
        g = np.zeros_like(data)
        flat = data.reshape(-1)
        gflat = g.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + epsilon
            f_plus = loss_fn()
            flat[i] = orig - epsilon
            f_minus = loss_fn()
            flat[i] = orig
            gflat[i] = (f_plus - f_minus) / (2.0 * epsilon)
        grads[name] = g
    return grads
