"""Adaptive-moment optimizer with bias correction.

State is kept per parameter name, including its own step counter, so a
parameter that sits out some steps (e.g. a frozen stage) keeps correct
bias correction when it rejoins.
"""

from __future__ import annotations

import numpy as np

from ..errors import ShapeMismatch
from .tensor import Tensor


class AdamState:
    def __init__(self):
        self.m: dict[str, np.ndarray] = {}
        self.v: dict[str, np.ndarray] = {}
        self.t: dict[str, int] = {}


def adam_step(
    params: dict[str, Tensor],
    grads: dict[str, np.ndarray],
    state: AdamState,
    lr: float,
    betas: tuple[float, float] = (0.9, 0.999),
    eps: float = 1e-8,
) -> tuple[dict[str, Tensor], AdamState]:
    """One update for every name in ``grads``; mutates params and state
    in place and returns them."""
    b1, b2 = betas
    for name, grad in grads.items():
        param = params[name]
        grad = np.asarray(grad, dtype=param.data.dtype)
        if grad.shape != param.data.shape:
            raise ShapeMismatch(
                f"{name}: grad {grad.shape} vs param {param.data.shape}"
            )
        if name not in state.m:
            state.m[name] = np.zeros_like(param.data)
            state.v[name] = np.zeros_like(param.data)
            state.t[name] = 0
        state.t[name] += 1
        t = state.t[name]
        state.m[name] = b1 * state.m[name] + (1.0 - b1) * grad
        state.v[name] = b2 * state.v[name] + (1.0 - b2) * grad * grad
        m_hat = state.m[name] / (1.0 - b1**t)
        v_hat = state.v[name] / (1.0 - b2**t)
        param.data -= (lr * m_hat / (np.sqrt(v_hat) + eps)).astype(param.data.dtype)
    return params, state
