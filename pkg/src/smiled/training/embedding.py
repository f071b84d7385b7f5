"""Molecule embeddings and greedy decoding."""

from __future__ import annotations

import numpy as np

from ..model import ModelConfig, encode_tokens, latent_decode, latent_encode, lm_head
from ..nn import Tensor, as_tensor, div, mul, reshape, tensor_sum
from ..tokenizer import BOS_ID, EOS_ID, PAD_ID, SPECIALS, Vocabulary, encode, tokenize

LATENT = "latent"
MEAN_POOL = "mean_pool"
_FRAME_IDS = (PAD_ID, BOS_ID, EOS_ID)


def encode_smiles(smiles: str, vocab: Vocabulary, max_len: int) -> np.ndarray:
    return np.asarray(encode(tokenize(smiles), vocab, max_len), dtype=np.int64)


def pool_states(states: Tensor, ids: np.ndarray) -> Tensor:
    """Mean of token states over real tokens, excluding framing and
    padding ids.  (B, D, L) states -> (B, L).  Differentiable."""
    mask = (~np.isin(ids, _FRAME_IDS)).astype(np.float64)
    counts = np.maximum(mask.sum(axis=1, keepdims=True), 1.0)
    return div(tensor_sum(mul(states, mask[:, :, None]), axis=1), counts)


def embed_ids(
    ids: np.ndarray,
    params: dict[str, Tensor],
    config: ModelConfig,
    mode: str = LATENT,
    training: bool = False,
    rng: np.random.Generator | None = None,
) -> Tensor:
    """Differentiable embedding of encoded id sequences: the latent
    z-vector, or the pad-masked mean of token states.  1-d ids give an
    (L,) result, a batch gives (B, L)."""
    ids = np.asarray(ids)
    squeeze = ids.ndim == 1
    batch = ids[None, :] if squeeze else ids
    states = encode_tokens(batch, params, config, training=training, rng=rng)
    if mode == LATENT:
        out = latent_encode(states, params, config)
    elif mode == MEAN_POOL:
        out = pool_states(states, batch)
    else:
        raise ValueError(f"unknown embedding mode {mode!r}")
    return reshape(out, (out.shape[-1],)) if squeeze else out


def embed(
    smiles: str,
    params: dict[str, Tensor],
    config: ModelConfig,
    vocab: Vocabulary,
    mode: str = LATENT,
) -> np.ndarray:
    """L-vector for one SMILES string (eval mode, deterministic)."""
    ids = encode_smiles(smiles, vocab, config.max_len)
    return embed_ids(ids, params, config, mode=mode).data.copy()


def greedy_decode(
    z: np.ndarray,
    params: dict[str, Tensor],
    config: ModelConfig,
    vocab: Vocabulary,
) -> str:
    """Latent vector -> SMILES text: decode, project to logits, take the
    per-position argmax, cut at the first [EOS], drop special tokens.
    The output may be chemically invalid; callers validate."""
    recon = latent_decode(as_tensor(np.asarray(z, dtype=np.float64)), params, config)
    logits = lm_head(recon, params, config)
    pred = logits.data.argmax(axis=-1)
    parts = []
    for idx in pred:
        if idx == EOS_ID:
            break
        token = vocab.token(int(idx))
        if token not in SPECIALS:
            parts.append(token)
    return "".join(parts)
