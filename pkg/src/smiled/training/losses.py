"""Pre-training objectives."""

from __future__ import annotations

import numpy as np

from ..model import ModelConfig, encode_tokens, latent_decode, latent_encode, lm_head
from ..nn import Tensor, cross_entropy
from ..tokenizer import PAD_ID


def mlm_loss(logits: Tensor, targets: np.ndarray, target_mask: np.ndarray) -> Tensor:
    """Mean cross-entropy over the masked positions only; an empty mask
    yields 0 with zero gradient."""
    return cross_entropy(logits, targets, target_mask)


def reconstruction_loss(
    ids: np.ndarray,
    params: dict[str, Tensor],
    config: ModelConfig,
    training: bool = False,
    rng: np.random.Generator | None = None,
    detach_encoder: bool = False,
) -> Tensor:
    """Cross-entropy of the latent round trip (encode -> z -> decode ->
    logits) against the uncorrupted ids, averaged over non-pad positions.
    With ``detach_encoder`` the token states are treated as constants, so
    only the latent coder and language head receive gradients."""
    ids = np.asarray(ids)
    states = encode_tokens(ids, params, config, training=training, rng=rng)
    if detach_encoder:
        states = states.detach()
    z = latent_encode(states, params, config)
    recon = latent_decode(z, params, config)
    logits = lm_head(recon, params, config)
    mask = (ids != PAD_ID).astype(np.float64)
    return cross_entropy(logits, ids, mask)
