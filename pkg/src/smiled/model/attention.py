"""Rotary position encoding and random-feature linear attention.

Queries and keys are rotated pairwise by position-dependent angles
(frequencies base^(-2i/d), base 10000); attention weights come from a
positive random feature map, so the bidirectional kernel average is
computed with one global key sum instead of an N x N weight matrix.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import OddHeadDim, ShapeMismatch
from ..nn import (
    Tensor,
    clip_min,
    concat,
    div,
    exp,
    matmul,
    mul,
    reshape,
    tensor_sum,
    transpose,
)

ROTARY_BASE = 10000.0
DENOM_FLOOR = 1e-8


def rotation_angles(positions: np.ndarray, head_dim: int) -> tuple[np.ndarray, np.ndarray]:
    """cos/sin tables of shape (len(positions), head_dim // 2)."""
    if head_dim % 2 != 0:
        raise OddHeadDim(f"head dimension {head_dim} is odd")
    half = head_dim // 2
    freqs = ROTARY_BASE ** (-2.0 * np.arange(half) / head_dim)
    angles = np.asarray(positions, dtype=np.float64)[:, None] * freqs[None, :]
    return np.cos(angles), np.sin(angles)


def rotate(q: np.ndarray, m: int) -> np.ndarray:
    """Rotate one head vector to position ``m`` (the single-vector form;
    batched paths use ``apply_rotation``)."""
    q = np.asarray(q, dtype=np.float64)
    cos, sin = rotation_angles(np.array([m]), q.shape[-1])
    even, odd = q[0::2], q[1::2]
    out = np.empty_like(q)
    out[0::2] = even * cos[0] - odd * sin[0]
    out[1::2] = even * sin[0] + odd * cos[0]
    return out


def apply_rotation(x: Tensor, cos: np.ndarray, sin: np.ndarray) -> Tensor:
    """Pairwise rotation of (..., N, d) by per-position angles."""
    d = x.shape[-1]
    if d % 2 != 0:
        raise OddHeadDim(f"head dimension {d} is odd")
    even = x[..., 0::2]
    odd = x[..., 1::2]
    out_even = mul(even, cos) - mul(odd, sin)
    out_odd = mul(even, sin) + mul(odd, cos)
    # Interleave back: stack on a trailing axis, then flatten the pair.
    stacked = concat(
        [reshape(out_even, (*out_even.shape, 1)), reshape(out_odd, (*out_odd.shape, 1))],
        axis=-1,
    )
    return reshape(stacked, x.shape)


def feature_map(u: Tensor, proj: Tensor, stabilizer: np.ndarray | None = None) -> Tensor:
    """Positive random features: exp(w.u - |u|^2 / 2) / sqrt(m).

    ``proj`` holds the frozen projection(s) w with trailing shape (d, m).
    ``stabilizer`` is an optional constant subtracted inside the exp; any
    per-query or per-sequence constant cancels in the attention ratio.
    """
    m = proj.shape[-1]
    scores = matmul(u, proj)
    sq = mul(tensor_sum(mul(u, u), axis=-1, keepdims=True), 0.5)
    raw = scores - sq
    if stabilizer is not None:
        raw = raw - stabilizer
    return mul(exp(raw), 1.0 / math.sqrt(m))


def linear_attention(
    q: Tensor,
    k: Tensor,
    v: Tensor,
    proj: Tensor,
    cos: np.ndarray,
    sin: np.ndarray,
    mask: np.ndarray,
) -> Tensor:
    """Kernel-weighted average over all positions in linear time.

    Shapes: q, k, v are (B, H, N, d); ``proj`` (H, d, m); ``mask`` (B, N)
    with 1 for real tokens and 0 for padding.  Padded positions are
    excluded from both sums; the denominator is floored at 1e-8.
    """
    if q.shape != k.shape or k.shape != v.shape:
        raise ShapeMismatch(f"q/k/v shapes differ: {q.shape}, {k.shape}, {v.shape}")
    batch, _, n, _ = q.shape
    if mask.shape != (batch, n):
        raise ShapeMismatch(f"mask {mask.shape} vs sequence ({batch}, {n})")

    qr = apply_rotation(q, cos, sin)
    kr = apply_rotation(k, cos, sin)

    # Stabilize the exponentials with detached constants: per-query-position
    # for phi(q), one per (batch, head) for phi(k).  Both cancel exactly in
    # the ratio below.
    def raw_scores(u: Tensor) -> np.ndarray:
        s = np.matmul(u.data, proj.data)
        return s - 0.5 * (u.data**2).sum(axis=-1, keepdims=True)

    stab_q = raw_scores(qr).max(axis=-1, keepdims=True)
    raw_k_const = raw_scores(kr)
    key_mask = mask[:, None, :, None].astype(q.dtype)
    masked_raw_k = np.where(key_mask > 0, raw_k_const, -np.inf)
    stab_k = masked_raw_k.max(axis=(2, 3), keepdims=True)

    phi_q = feature_map(qr, proj, stabilizer=stab_q)
    phi_k = mul(feature_map(kr, proj, stabilizer=stab_k), key_mask)

    kv = matmul(transpose(phi_k, (0, 1, 3, 2)), v)          # (B, H, m, d)
    numer = matmul(phi_q, kv)                               # (B, H, N, d)
    key_sum = transpose(tensor_sum(phi_k, axis=2, keepdims=True), (0, 1, 3, 2))
    denom = clip_min(matmul(phi_q, key_sum), DENOM_FLOOR)   # (B, H, N, 1)
    return div(numer, denom)


def explicit_attention(
    q: Tensor,
    k: Tensor,
    v: Tensor,
    proj: Tensor,
    cos: np.ndarray,
    sin: np.ndarray,
    mask: np.ndarray,
) -> np.ndarray:
    """Quadratic-form reference: materializes the N x N kernel weights.
    Forward-only; used to verify the linear form."""
    qr = apply_rotation(q, cos, sin).data
    kr = apply_rotation(k, cos, sin).data

    def phi(u):
        m = proj.shape[-1]
        scores = np.matmul(u, proj.data)
        sq = 0.5 * (u**2).sum(axis=-1, keepdims=True)
        return np.exp(scores - sq) / math.sqrt(m)

    pq, pk = phi(qr), phi(kr)
    weights = np.matmul(pq, np.swapaxes(pk, -1, -2))        # (B, H, N, N)
    weights = weights * mask[:, None, None, :]
    denom = np.maximum(weights.sum(axis=-1, keepdims=True), DENOM_FLOOR)
    return np.matmul(weights / denom, v.data)
