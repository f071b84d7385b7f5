"""Downstream task heads and fine-tuning.

The task head is a two-layer fully connected network (affine, GELU,
affine).  Frozen mode trains only the head on precomputed molecule
embeddings; full mode backpropagates through the encoder as well.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import LabelShapeMismatch
from ..model import ModelConfig
from ..nn import (
    AdamState,
    Tape,
    Tensor,
    adam_step,
    add,
    as_tensor,
    cross_entropy,
    gelu,
    matmul,
    mse,
    reshape,
)
from ..tokenizer import Vocabulary
from .embedding import LATENT, embed_ids, encode_smiles

CLASSIFY = "classify"
REGRESS = "regress"


@dataclass(frozen=True)
class FinetuneConfig:
    lr: float = 3e-5
    batch_size: int = 32
    epochs: int = 500
    head_hidden: int | None = None   # defaults to the input width
    betas: tuple[float, float] = (0.9, 0.999)
    eps: float = 1e-8


def init_head(
    in_dim: int, out_dim: int, hidden: int, rng: np.random.Generator, dtype=np.float64
) -> dict[str, Tensor]:
    def uniform(fan_in, shape):
        bound = 1.0 / np.sqrt(fan_in)
        return Tensor(rng.uniform(-bound, bound, size=shape).astype(dtype), requires_grad=True)

    return {
        "fc1.w": uniform(in_dim, (in_dim, hidden)),
        "fc1.b": Tensor(np.zeros(hidden, dtype=dtype), requires_grad=True),
        "fc2.w": uniform(hidden, (hidden, out_dim)),
        "fc2.b": Tensor(np.zeros(out_dim, dtype=dtype), requires_grad=True),
    }


def head_forward(x: Tensor, head: dict[str, Tensor]) -> Tensor:
    h = gelu(add(matmul(x, head["fc1.w"]), head["fc1.b"]))
    return add(matmul(h, head["fc2.w"]), head["fc2.b"])


def _check_labels(n: int, labels: np.ndarray, task: str) -> np.ndarray:
    labels = np.asarray(labels)
    if labels.shape[0] != n or labels.ndim != 1:
        raise LabelShapeMismatch(
            f"labels shape {labels.shape} does not match {n} inputs"
        )
    if task == CLASSIFY:
        return labels.astype(np.int64)
    if task == REGRESS:
        return labels.astype(np.float64)
    raise ValueError(f"unknown task {task!r}")


def _task_loss(logits: Tensor, labels: np.ndarray, task: str) -> Tensor:
    if task == CLASSIFY:
        return cross_entropy(logits, labels)
    return mse(reshape(logits, (logits.shape[0],)), as_tensor(labels))


def finetune_frozen(
    features: np.ndarray,
    labels: np.ndarray,
    task: str,
    cfg: FinetuneConfig,
    rng: np.random.Generator,
) -> tuple[dict[str, Tensor], list[float]]:
    """Train the head on precomputed embeddings.  Returns the head and
    the per-epoch mean training loss."""
    features = np.asarray(features, dtype=np.float64)
    labels = _check_labels(features.shape[0], labels, task)
    out_dim = int(labels.max()) + 1 if task == CLASSIFY else 1
    hidden = cfg.head_hidden or features.shape[1]
    head = init_head(features.shape[1], out_dim, hidden, rng)
    state = AdamState()
    history = []
    n = features.shape[0]
    for _ in range(cfg.epochs):
        order = rng.permutation(n)
        epoch_losses = []
        for start in range(0, n, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            with Tape() as tape:
                logits = head_forward(as_tensor(features[idx]), head)
                loss = _task_loss(logits, labels[idx], task)
                tape.backward(loss)
            grads = {k: t.grad for k, t in head.items() if t.grad is not None}
            adam_step(head, grads, state, lr=cfg.lr, betas=cfg.betas, eps=cfg.eps)
            for t in head.values():
                t.zero_grad()
            epoch_losses.append(float(loss.data))
        history.append(float(np.mean(epoch_losses)))
    return head, history


def finetune_full(
    smiles_list: list[str],
    labels: np.ndarray,
    task: str,
    cfg: FinetuneConfig,
    params: dict[str, Tensor],
    config: ModelConfig,
    vocab: Vocabulary,
    rng: np.random.Generator,
    mode: str = LATENT,
) -> tuple[dict[str, Tensor], dict[str, Tensor], list[float]]:
    """End-to-end fine-tuning: gradients flow through the embedding into
    the encoder.  Returns (head, updated params, loss history)."""
    ids = np.stack([encode_smiles(s, vocab, config.max_len) for s in smiles_list])
    labels = _check_labels(ids.shape[0], labels, task)
    out_dim = int(labels.max()) + 1 if task == CLASSIFY else 1
    hidden = cfg.head_hidden or config.hidden
    head = init_head(config.hidden, out_dim, hidden, rng, dtype=params["embed"].dtype)
    state = AdamState()
    history = []
    n = ids.shape[0]
    for _ in range(cfg.epochs):
        order = rng.permutation(n)
        epoch_losses = []
        for start in range(0, n, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            with Tape() as tape:
                emb = embed_ids(
                    ids[idx], params, config, mode=mode, training=True, rng=rng
                )
                logits = head_forward(emb, head)
                loss = _task_loss(logits, labels[idx], task)
                tape.backward(loss)
            everything = {**{f"head:{k}": t for k, t in head.items()}, **params}
            grads = {
                k: t.grad
                for k, t in everything.items()
                if t.requires_grad and t.grad is not None
            }
            adam_step(everything, grads, state, lr=cfg.lr, betas=cfg.betas, eps=cfg.eps)
            for t in everything.values():
                t.zero_grad()
            epoch_losses.append(float(loss.data))
        history.append(float(np.mean(epoch_losses)))
    return head, params, history


def predict(features: np.ndarray, head: dict[str, Tensor], task: str) -> np.ndarray:
    """Head outputs: class probabilities of class 1 for classification
    (binary: column 1 of the softmax), raw values for regression."""
    logits = head_forward(as_tensor(np.asarray(features, dtype=np.float64)), head).data
    if task == CLASSIFY:
        shifted = logits - logits.max(axis=-1, keepdims=True)
        probs = np.exp(shifted) / np.exp(shifted).sum(axis=-1, keepdims=True)
        return probs[:, 1] if probs.shape[1] == 2 else probs
    return logits[:, 0]
