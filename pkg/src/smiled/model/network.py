"""Parameter initialization and the model forward passes: token encoder
stack, latent coder, and language head.

Parameters live in a flat name -> Tensor dict.  The per-head random
feature projections are part of the parameter set (they must persist
across checkpoints) but are frozen: ``requires_grad`` stays False.
"""

from __future__ import annotations

import numpy as np

from ..errors import ShapeMismatch, UnknownId
from ..nn import (
    Tensor,
    add,
    dropout,
    embedding,
    gelu,
    layernorm,
    matmul,
    reshape,
    transpose,
)
from ..tokenizer import PAD_ID
from .attention import linear_attention, rotation_angles
from .config import ModelConfig


def init_params(
    config: ModelConfig, rng: np.random.Generator, dtype=np.float32
) -> dict[str, Tensor]:
    """Fresh parameters: embeddings N(0, 0.02), fan-in scaled uniform
    projections, unit/zero layernorm affines, frozen feature maps."""
    params: dict[str, Tensor] = {}

    def uniform(name: str, fan_in: int, shape: tuple[int, ...]) -> None:
        bound = 1.0 / np.sqrt(fan_in)
        params[name] = Tensor(
            rng.uniform(-bound, bound, size=shape).astype(dtype), requires_grad=True
        )

    def zeros(name: str, shape: tuple[int, ...]) -> None:
        params[name] = Tensor(np.zeros(shape, dtype=dtype), requires_grad=True)

    def ones(name: str, shape: tuple[int, ...]) -> None:
        params[name] = Tensor(np.ones(shape, dtype=dtype), requires_grad=True)

    L, D, V = config.hidden, config.max_len, config.vocab_size
    params["embed"] = Tensor(
        (rng.standard_normal((V, L)) * 0.02).astype(dtype), requires_grad=True
    )
    for i in range(config.layers):
        p = f"layer{i}"
        for proj in ("wq", "wk", "wv", "wo"):
            uniform(f"{p}.attn.{proj}", L, (L, L))
        for b in ("bq", "bk", "bv", "bo"):
            zeros(f"{p}.attn.{b}", (L,))
        params[f"{p}.attn.features"] = Tensor(
            rng.standard_normal(
                (config.heads, config.head_dim, config.feature_dim)
            ).astype(dtype),
            requires_grad=False,
        )
        ones(f"{p}.ln1.g", (L,))
        zeros(f"{p}.ln1.b", (L,))
        ones(f"{p}.ln2.g", (L,))
        zeros(f"{p}.ln2.b", (L,))
        uniform(f"{p}.ffn.w1", L, (L, 4 * L))
        zeros(f"{p}.ffn.b1", (4 * L,))
        uniform(f"{p}.ffn.w2", 4 * L, (4 * L, L))
        zeros(f"{p}.ffn.b2", (L,))

    uniform("latent.w1", D * L, (D * L, L))
    zeros("latent.b1", (L,))
    ones("latent.ln.g", (L,))
    zeros("latent.ln.b", (L,))
    uniform("latent.w2", L, (L, L))
    uniform("latent.w3", L, (L, L))
    zeros("latent.b3", (L,))
    ones("latent.ln2.g", (L,))
    zeros("latent.ln2.b", (L,))
    uniform("latent.w4", L, (L, D * L))

    uniform("head.w1", L, (L, L))
    zeros("head.b1", (L,))
    ones("head.ln.g", (L,))
    zeros("head.ln.b", (L,))
    uniform("head.w2", L, (L, V))
    zeros("head.b2", (V,))
    return params


def trainable(params: dict[str, Tensor]) -> dict[str, Tensor]:
    return {k: v for k, v in params.items() if v.requires_grad}


def _as_batch(ids: np.ndarray) -> tuple[np.ndarray, bool]:
    ids = np.asarray(ids)
    if ids.ndim == 1:
        return ids[None, :], True
    if ids.ndim == 2:
        return ids, False
    raise ShapeMismatch(f"ids must be 1-d or 2-d, got {ids.shape}")


def encode_tokens(
    ids: np.ndarray,
    params: dict[str, Tensor],
    config: ModelConfig,
    training: bool = False,
    rng: np.random.Generator | None = None,
    mask: np.ndarray | None = None,
) -> Tensor:
    """Bidirectional encoder: (B, D) ids -> (B, D, L) states (a single
    sequence in, a single (D, L) block out).  ``mask`` defaults to
    ``ids != PAD``; padded positions never contribute to attention sums.
    Dropout fires only in training mode."""
    ids, squeeze = _as_batch(ids)
    if ids.min() < 0 or ids.max() >= config.vocab_size:
        raise UnknownId(
            f"token id out of range [0, {config.vocab_size}): {ids.min()}..{ids.max()}"
        )
    if ids.shape[1] != config.max_len:
        raise ShapeMismatch(f"sequence length {ids.shape[1]} != D={config.max_len}")
    if training and config.dropout > 0 and rng is None:
        raise ValueError("training-mode dropout needs an rng")

    if mask is None:
        mask = (ids != PAD_ID).astype(np.float64)
    else:
        mask = np.asarray(mask, dtype=np.float64)
        if squeeze and mask.ndim == 1:
            mask = mask[None, :]

    B, D = ids.shape
    L, H, dh = config.hidden, config.heads, config.head_dim
    cos, sin = rotation_angles(np.arange(D), dh)

    h = embedding(params["embed"], ids)
    for i in range(config.layers):
        p = f"layer{i}"

        def heads_of(name: str, bias: str) -> Tensor:
            flat = add(matmul(h, params[name]), params[bias])
            return transpose(reshape(flat, (B, D, H, dh)), (0, 2, 1, 3))

        q = heads_of(f"{p}.attn.wq", f"{p}.attn.bq")
        k = heads_of(f"{p}.attn.wk", f"{p}.attn.bk")
        v = heads_of(f"{p}.attn.wv", f"{p}.attn.bv")
        ctx = linear_attention(q, k, v, params[f"{p}.attn.features"], cos, sin, mask)
        ctx = reshape(transpose(ctx, (0, 2, 1, 3)), (B, D, L))
        ctx = add(matmul(ctx, params[f"{p}.attn.wo"]), params[f"{p}.attn.bo"])
        ctx = dropout(ctx, config.dropout, rng, training)
        h = layernorm(add(h, ctx), params[f"{p}.ln1.g"], params[f"{p}.ln1.b"])

        ff = gelu(add(matmul(h, params[f"{p}.ffn.w1"]), params[f"{p}.ffn.b1"]))
        ff = add(matmul(ff, params[f"{p}.ffn.w2"]), params[f"{p}.ffn.b2"])
        ff = dropout(ff, config.dropout, rng, training)
        h = layernorm(add(h, ff), params[f"{p}.ln2.g"], params[f"{p}.ln2.b"])

    return reshape(h, (D, L)) if squeeze else h


def latent_encode(x: Tensor, params: dict[str, Tensor], config: ModelConfig) -> Tensor:
    """Full (D, L) token-state block -> L-vector: flatten row-major, then
    affine + GELU + layernorm + linear map."""
    D, L = config.max_len, config.hidden
    squeeze = x.shape == (D, L)
    if squeeze:
        x = reshape(x, (1, D, L))
    if x.shape[1:] != (D, L):
        raise ShapeMismatch(f"latent_encode expects (.., {D}, {L}), got {x.shape}")
    flat = reshape(x, (x.shape[0], D * L))
    hidden = gelu(add(matmul(flat, params["latent.w1"]), params["latent.b1"]))
    hidden = layernorm(hidden, params["latent.ln.g"], params["latent.ln.b"])
    z = matmul(hidden, params["latent.w2"])
    return reshape(z, (L,)) if squeeze else z


def latent_decode(z: Tensor, params: dict[str, Tensor], config: ModelConfig) -> Tensor:
    """L-vector -> reconstructed (D, L) token-state block."""
    D, L = config.max_len, config.hidden
    squeeze = z.shape == (L,)
    if squeeze:
        z = reshape(z, (1, L))
    if z.shape[-1] != L:
        raise ShapeMismatch(f"latent_decode expects (.., {L}), got {z.shape}")
    hidden = gelu(add(matmul(z, params["latent.w3"]), params["latent.b3"]))
    hidden = layernorm(hidden, params["latent.ln2.g"], params["latent.ln2.b"])
    x = matmul(hidden, params["latent.w4"])
    x = reshape(x, (z.shape[0], D, L))
    return reshape(x, (D, L)) if squeeze else x


def lm_head(states: Tensor, params: dict[str, Tensor], config: ModelConfig) -> Tensor:
    """Per-position nonlinearity + layernorm + projection to vocab logits."""
    L = config.hidden
    if states.shape[-1] != L:
        raise ShapeMismatch(f"lm_head expects last dim {L}, got {states.shape}")
    h = gelu(add(matmul(states, params["head.w1"]), params["head.b1"]))
    h = layernorm(h, params["head.ln.g"], params["head.ln.b"])
    return add(matmul(h, params["head.w2"]), params["head.b2"])
