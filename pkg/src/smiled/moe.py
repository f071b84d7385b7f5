"""Top-K sparse mixture of expert encoders.

The gate scores a pooled molecule embedding against a gating matrix,
keeps the top k logits, and softmaxes over the survivors; every other
expert gets exactly zero weight, so outputs depend on the active experts
only.  Gate fine-tuning trains the gating matrix and the task head while
the experts stay frozen, with gradients flowing through the soft weights
of the active experts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigMismatch, KTooLarge, LabelShapeMismatch
from .model import ModelConfig, load_checkpoint, save_checkpoint
from .nn import (
    AdamState,
    Tape,
    Tensor,
    adam_step,
    as_tensor,
    matmul,
    mul,
    reshape,
    seeded_rng,
    softmax,
    tensor_sum,
)
from .tokenizer import Vocabulary
from .training.embedding import MEAN_POOL, embed
from .training.finetune import (
    FinetuneConfig,
    _check_labels,
    _task_loss,
    head_forward,
    init_head,
)


@dataclass(frozen=True)
class GateDecision:
    """Active expert indices (descending by logit, ties to the lower
    index) and their softmax weights."""

    expert_indices: tuple[int, ...]
    weights: np.ndarray


@dataclass(frozen=True)
class MoEConfig:
    n_experts: int = 8
    k_active: int = 2

    def __post_init__(self):
        if not 1 <= self.k_active <= self.n_experts:
            raise KTooLarge(f"k={self.k_active} outside [1, {self.n_experts}]")


def top_k_indices(logits: np.ndarray, k: int) -> tuple[int, ...]:
    """Indices of the k largest logits, descending, ties broken toward
    the lower index."""
    order = sorted(range(len(logits)), key=lambda i: (-logits[i], i))
    return tuple(order[:k])


def gate(x: np.ndarray, wg: np.ndarray, k: int) -> GateDecision:
    """G(x) = softmax over the top-k entries of x . Wg."""
    x = np.asarray(x, dtype=np.float64)
    wg = np.asarray(wg, dtype=np.float64)
    n = wg.shape[1]
    if k > n:
        raise KTooLarge(f"k={k} > {n} experts")
    logits = x @ wg
    idx = top_k_indices(logits, k)
    kept = logits[list(idx)]
    shifted = np.exp(kept - kept.max())
    return GateDecision(expert_indices=idx, weights=shifted / shifted.sum())


def _gate_weights_tensor(x: Tensor, wg: Tensor, k: int) -> tuple[Tensor, np.ndarray]:
    """Batched differentiable gate: returns (B, k) soft weights and the
    (B, k) int index matrix.  Selection is done on detached logits; the
    weights carry the gradient."""
    logits = matmul(x, wg)                      # (B, n)
    raw = logits.data
    idx = np.stack([np.array(top_k_indices(row, k)) for row in raw])
    picked = logits[np.arange(raw.shape[0])[:, None], idx]
    return softmax(picked, axis=-1), idx


@dataclass
class ExpertEnsemble:
    """Frozen expert checkpoints plus the gating state.

    The gate embedding comes from a dedicated encoder (by default the
    first expert's checkpoint) so that inactive experts can never leak
    into the output through the routing input.
    """

    experts: list[dict[str, Tensor]]
    config: ModelConfig
    wg: Tensor
    k: int
    gate_params: dict[str, Tensor]

    @property
    def n(self) -> int:
        return len(self.experts)


def load_ensemble(manifest_path) -> ExpertEnsemble:
    """Manifest: JSON with "experts" (checkpoint paths), "k", "wg"
    (gating checkpoint path), and optionally "gate" (gate encoder
    checkpoint; defaults to the first expert)."""
    manifest_path = Path(manifest_path)
    spec = json.loads(manifest_path.read_text())
    base = manifest_path.parent
    expert_paths = [base / p for p in spec["experts"]]
    k = int(spec["k"])
    experts = []
    config = None
    for p in expert_paths:
        params, cfg = load_checkpoint(p, expect_config=config)
        config = cfg
        experts.append(params)
    if not 1 <= k <= len(experts):
        raise KTooLarge(f"k={k} outside [1, {len(experts)}]")
    wg_params, _ = load_checkpoint(base / spec["wg"], expect_config=None)
    if "wg" not in wg_params:
        raise ConfigMismatch(f"{spec['wg']}: no 'wg' tensor in gating checkpoint")
    gate_path = base / spec.get("gate", spec["experts"][0])
    gate_params, _ = load_checkpoint(gate_path, expect_config=config)
    return ExpertEnsemble(
        experts=experts, config=config, wg=wg_params["wg"], k=k, gate_params=gate_params
    )


def save_gating(wg: Tensor, config: ModelConfig, path) -> None:
    save_checkpoint({"wg": wg}, config, path)


def mix_expert_outputs(decision: GateDecision, expert_outputs: np.ndarray) -> np.ndarray:
    """y = sum over active experts of weight_i * output_i."""
    picked = expert_outputs[list(decision.expert_indices)]
    return (decision.weights[:, None] * picked).sum(axis=0)


def moe_forward(
    smiles: str,
    ensemble: ExpertEnsemble,
    vocab: Vocabulary,
    head: dict[str, Tensor] | None = None,
) -> np.ndarray:
    """Route one molecule: gate on the pooled embedding, mix the active
    experts' embeddings, and apply the task head if given."""
    x = embed(smiles, ensemble.gate_params, ensemble.config, vocab, mode=MEAN_POOL)
    decision = gate(x, ensemble.wg.data, ensemble.k)
    outputs = np.stack(
        [
            embed(smiles, ensemble.experts[i], ensemble.config, vocab, mode=MEAN_POOL)
            for i in range(ensemble.n)
        ]
    )
    y = mix_expert_outputs(decision, outputs)
    if head is None:
        return y
    return head_forward(as_tensor(y[None, :]), head).data[0]


def train_gate(
    gate_inputs: np.ndarray,
    expert_outputs: np.ndarray,
    labels: np.ndarray,
    task: str,
    k: int,
    cfg: FinetuneConfig,
    seed: int,
    head_out_dim: int | None = None,
) -> tuple[Tensor, dict[str, Tensor], list[float]]:
    """Core gate/head optimization on precomputed arrays.

    ``gate_inputs``: (N, L) routing embeddings; ``expert_outputs``:
    (n_experts, N, E) frozen per-expert embeddings.  Returns (Wg, head,
    loss history).  Gradients reach Wg through the softmax weights of the
    active experts only.
    """
    gate_inputs = np.asarray(gate_inputs, dtype=np.float64)
    expert_outputs = np.asarray(expert_outputs, dtype=np.float64)
    n_experts, n_samples, emb_dim = expert_outputs.shape
    if gate_inputs.shape[0] != n_samples:
        raise LabelShapeMismatch(
            f"{gate_inputs.shape[0]} gate inputs vs {n_samples} expert outputs"
        )
    if k > n_experts:
        raise KTooLarge(f"k={k} > {n_experts} experts")
    labels = _check_labels(n_samples, labels, task)

    rng = seeded_rng(seed)
    out_dim = head_out_dim or (int(labels.max()) + 1 if task == "classify" else 1)
    head = init_head(emb_dim, out_dim, cfg.head_hidden or emb_dim, rng)
    wg = Tensor(
        rng.uniform(-0.1, 0.1, size=(gate_inputs.shape[1], n_experts)),
        requires_grad=True,
    )
    trainables = {"wg": wg, **{f"head:{k_}": v for k_, v in head.items()}}
    state = AdamState()
    history = []
    for _ in range(cfg.epochs):
        order = rng.permutation(n_samples)
        epoch_losses = []
        for start in range(0, n_samples, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            with Tape() as tape:
                weights, chosen = _gate_weights_tensor(
                    as_tensor(gate_inputs[idx]), wg, k
                )
                # (B, k, E) stack of the chosen experts' frozen outputs.
                chosen_outputs = expert_outputs[chosen, idx[:, None], :]
                mixed = tensor_weighted_sum(weights, chosen_outputs)
                logits = head_forward(mixed, head)
                loss = _task_loss(logits, labels[idx], task)
                tape.backward(loss)
            grads = {
                name: t.grad
                for name, t in trainables.items()
                if t.grad is not None
            }
            adam_step(trainables, grads, state, lr=cfg.lr, betas=cfg.betas, eps=cfg.eps)
            for t in trainables.values():
                t.zero_grad()
            epoch_losses.append(float(loss.data))
        history.append(float(np.mean(epoch_losses)))
    return wg, head, history


def tensor_weighted_sum(weights: Tensor, outputs: np.ndarray) -> Tensor:
    """(B, k) weights x (B, k, E) constant outputs -> (B, E)."""
    w = reshape(weights, (*weights.shape, 1))
    return tensor_sum(mul(w, outputs), axis=1)


def moe_finetune(
    smiles_list: list[str],
    labels: np.ndarray,
    ensemble: ExpertEnsemble,
    vocab: Vocabulary,
    task: str,
    cfg: FinetuneConfig,
    seed: int,
) -> tuple[Tensor, dict[str, Tensor], list[float]]:
    """Fine-tune the gate and task head over frozen experts.  Expert and
    gate embeddings are precomputed once since the experts never move."""
    gate_inputs = np.stack(
        [
            embed(s, ensemble.gate_params, ensemble.config, vocab, mode=MEAN_POOL)
            for s in smiles_list
        ]
    )
    expert_outputs = np.stack(
        [
            np.stack(
                [
                    embed(s, params, ensemble.config, vocab, mode=MEAN_POOL)
                    for s in smiles_list
                ]
            )
            for params in ensemble.experts
        ]
    )
    wg, head, history = train_gate(
        gate_inputs, expert_outputs, labels, task, ensemble.k, cfg, seed
    )
    ensemble.wg = wg
    return wg, head, history
