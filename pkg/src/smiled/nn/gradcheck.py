"""Finite-difference verification of tape gradients."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .tensor import Tape, Tensor


def _relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-6):
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return np.abs(analytic - numeric) / denom


def grad_check(
    f: Callable[[Tensor], Tensor], x: Tensor, eps: float = 1e-5
) -> float:
    """Max relative error between the tape gradient of scalar-valued ``f``
    and central finite differences, elementwise over ``x``."""
    x.requires_grad = True
    x.zero_grad()
    with Tape() as tape:
        tape.backward(f(x))
    analytic = x.grad.copy()

    numeric = np.zeros_like(x.data)
    flat = x.data.reshape(-1)
    num_flat = numeric.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + eps
        up = float(f(x).data)
        flat[i] = orig - eps
        down = float(f(x).data)
        flat[i] = orig
        num_flat[i] = (up - down) / (2.0 * eps)

    return float(_relative_error(analytic, numeric).max())


def grad_check_many(
    f: Callable[[], Tensor],
    tensors: dict[str, Tensor],
    eps: float = 1e-5,
    samples_per_tensor: int | None = None,
    rng: np.random.Generator | None = None,
) -> float:
    """Gradient check over several named tensors at once.

    ``f`` closes over the tensors.  With ``samples_per_tensor`` set, only
    that many randomly chosen coordinates per tensor are perturbed (for
    whole-model checks); otherwise every coordinate is.
    """
    for t in tensors.values():
        t.requires_grad = True
        t.zero_grad()
    with Tape() as tape:
        tape.backward(f())
    analytic = {name: t.grad.copy() for name, t in tensors.items()}

    worst = 0.0
    for name, t in tensors.items():
        flat = t.data.reshape(-1)
        if samples_per_tensor is None or samples_per_tensor >= flat.size:
            coords = np.arange(flat.size)
        else:
            assert rng is not None, "rng required when sampling coordinates"
            coords = rng.choice(flat.size, size=samples_per_tensor, replace=False)
        for i in coords:
            orig = flat[i]
            flat[i] = orig + eps
            up = float(f().data)
            flat[i] = orig - eps
            down = float(f().data)
            flat[i] = orig
            numeric = (up - down) / (2.0 * eps)
            err = float(
                _relative_error(
                    analytic[name].reshape(-1)[i : i + 1],
                    np.array([numeric]),
                )[0]
            )
            worst = max(worst, err)
    return worst
