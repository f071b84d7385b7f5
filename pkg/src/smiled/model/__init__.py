"""Model architecture: rotary linear-attention encoder, latent coder,
language head, checkpoint I/O."""

from .attention import (
    apply_rotation,
    explicit_attention,
    feature_map,
    linear_attention,
    rotate,
    rotation_angles,
)
from .checkpoint import MAGIC, load_checkpoint, save_checkpoint
from .config import ModelConfig
from .network import (
    encode_tokens,
    init_params,
    latent_decode,
    latent_encode,
    lm_head,
    trainable,
)

__all__ = [
    "ModelConfig",
    "init_params",
    "trainable",
    "encode_tokens",
    "latent_encode",
    "latent_decode",
    "lm_head",
    "rotate",
    "rotation_angles",
    "apply_rotation",
    "feature_map",
    "linear_attention",
    "explicit_attention",
    "save_checkpoint",
    "load_checkpoint",
    "MAGIC",
]
