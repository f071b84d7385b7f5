"""Pre-training, fine-tuning, embeddings, and evaluation metrics."""

from .embedding import (
    LATENT,
    MEAN_POOL,
    embed,
    embed_ids,
    encode_smiles,
    greedy_decode,
    pool_states,
)
from .finetune import (
    CLASSIFY,
    REGRESS,
    FinetuneConfig,
    finetune_frozen,
    finetune_full,
    head_forward,
    init_head,
    predict,
)
from .losses import mlm_loss, reconstruction_loss
from .masking import MaskingPolicy, apply_masking
from .metrics import mae, rmse, roc_auc
from .pretrain import (
    LogRow,
    OptimizerSettings,
    PretrainSchedule,
    encode_corpus,
    masked_token_accuracy,
    pretrain,
    reconstruction_exact_match,
    write_loss_log,
)

__all__ = [
    "MaskingPolicy",
    "apply_masking",
    "mlm_loss",
    "reconstruction_loss",
    "PretrainSchedule",
    "OptimizerSettings",
    "LogRow",
    "pretrain",
    "encode_corpus",
    "write_loss_log",
    "masked_token_accuracy",
    "reconstruction_exact_match",
    "LATENT",
    "MEAN_POOL",
    "embed",
    "embed_ids",
    "encode_smiles",
    "pool_states",
    "greedy_decode",
    "FinetuneConfig",
    "CLASSIFY",
    "REGRESS",
    "init_head",
    "head_forward",
    "finetune_frozen",
    "finetune_full",
    "predict",
    "roc_auc",
    "rmse",
    "mae",
]
