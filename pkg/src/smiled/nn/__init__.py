"""Tensor math with reverse-mode autodiff, the optimizer, and gradient
verification."""

from .gradcheck import grad_check, grad_check_many
from .optim import AdamState, adam_step
from .rng import seeded_rng, split_rng
from .tensor import (
    Tape,
    Tensor,
    add,
    as_tensor,
    clip_min,
    concat,
    cross_entropy,
    div,
    dropout,
    embedding,
    exp,
    gelu,
    layernorm,
    matmul,
    mean,
    mse,
    mul,
    reshape,
    softmax,
    take,
    tensor_sum,
    transpose,
)

__all__ = [
    "Tape",
    "Tensor",
    "as_tensor",
    "add",
    "mul",
    "div",
    "matmul",
    "transpose",
    "reshape",
    "concat",
    "take",
    "tensor_sum",
    "mean",
    "embedding",
    "exp",
    "clip_min",
    "softmax",
    "gelu",
    "layernorm",
    "dropout",
    "cross_entropy",
    "mse",
    "AdamState",
    "adam_step",
    "grad_check",
    "grad_check_many",
    "seeded_rng",
    "split_rng",
]
