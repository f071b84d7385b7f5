"""Two-phase masked-LM + reconstruction pre-training.

Phase 1 routes each batch by a Bernoulli draw: 95% go to the masking
objective (token encoder + language head), 5% to the reconstruction
objective with the encoder states detached, so an unconverged encoder
cannot be dragged around by the latent coder.  Phase 2 applies both
losses, summed 1:1, to every batch.  A fixed seed and thread count give
a bit-identical loss log.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import ConfigMismatch
from ..model import ModelConfig, encode_tokens, init_params, lm_head, trainable
from ..nn import AdamState, Tape, Tensor, adam_step, split_rng
from ..tokenizer import Vocabulary, encode, tokenize
from .embedding import embed, greedy_decode
from .losses import mlm_loss, reconstruction_loss
from .masking import MaskingPolicy, apply_masking


@dataclass(frozen=True)
class PretrainSchedule:
    phase1_epochs: int
    phase2_epochs: int
    encoder_frac: float = 0.95   # phase-1 share routed to the masking objective
    encdec_frac: float = 0.05

    def __post_init__(self):
        if abs(self.encoder_frac + self.encdec_frac - 1.0) > 1e-9:
            raise ValueError("phase-1 routing fractions must sum to 1")


@dataclass(frozen=True)
class OptimizerSettings:
    lr: float = 1.6e-4
    betas: tuple[float, float] = (0.9, 0.999)
    eps: float = 1e-8
    batch_size: int = 288


@dataclass(frozen=True)
class LogRow:
    step: int
    phase: int
    objective: str
    loss: float


def encode_corpus(lines: Iterable[str], vocab: Vocabulary, max_len: int) -> np.ndarray:
    """Encode a SMILES corpus into an (n, D) id matrix."""
    rows = [encode(tokenize(line.strip()), vocab, max_len) for line in lines if line.strip()]
    if not rows:
        raise ConfigMismatch("empty corpus after encoding")
    return np.asarray(rows, dtype=np.int64)


def write_loss_log(rows: Sequence[LogRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "phase", "objective", "loss"])
        for row in rows:
            writer.writerow([row.step, row.phase, row.objective, f"{row.loss:.17g}"])


def _step(params, grads_source, state: AdamState, opt: OptimizerSettings) -> None:
    grads = {
        name: t.grad
        for name, t in grads_source.items()
        if t.requires_grad and t.grad is not None
    }
    adam_step(params, grads, state, lr=opt.lr, betas=opt.betas, eps=opt.eps)
    for t in grads_source.values():
        t.zero_grad()


def pretrain(
    sequences: np.ndarray,
    config: ModelConfig,
    schedule: PretrainSchedule,
    opt: OptimizerSettings,
    seed: int,
    policy: MaskingPolicy | None = None,
    params: dict[str, Tensor] | None = None,
    dtype=np.float32,
    max_steps: int | None = None,
) -> tuple[dict[str, Tensor], list[LogRow]]:
    """Train on an (n, D) id matrix; returns the parameters and the
    per-step loss log."""
    sequences = np.asarray(sequences)
    if sequences.ndim != 2 or sequences.shape[1] != config.max_len:
        raise ConfigMismatch(
            f"corpus shape {sequences.shape} does not match D={config.max_len}"
        )
    if sequences.max() >= config.vocab_size:
        raise ConfigMismatch(
            f"corpus ids reach {sequences.max()} but vocab size is {config.vocab_size}"
        )
    policy = policy or MaskingPolicy()
    if params is None:
        params = init_params(config, split_rng(seed, 0), dtype=dtype)
    train_rng = split_rng(seed, 1)
    state = AdamState()
    log: list[LogRow] = []
    step = 0
    n = sequences.shape[0]

    def batches():
        order = train_rng.permutation(n)
        for start in range(0, n, opt.batch_size):
            yield sequences[order[start : start + opt.batch_size]]

    def mlm_forward(batch) -> Tensor:
        corrupted, target_mask = apply_masking(batch, policy, train_rng, config.vocab_size)
        states = encode_tokens(
            corrupted, params, config, training=True, rng=train_rng
        )
        logits = lm_head(states, params, config)
        return mlm_loss(logits, batch, target_mask)

    done = False
    for phase, epochs in ((1, schedule.phase1_epochs), (2, schedule.phase2_epochs)):
        if done:
            break
        for _ in range(epochs):
            if done:
                break
            for batch in batches():
                step += 1
                with Tape() as tape:
                    if phase == 1:
                        route_mlm = train_rng.random() < schedule.encoder_frac
                        if route_mlm:
                            loss = mlm_forward(batch)
                            log.append(LogRow(step, 1, "mlm", float(loss.data)))
                        else:
                            loss = reconstruction_loss(
                                batch, params, config,
                                training=True, rng=train_rng, detach_encoder=True,
                            )
                            log.append(LogRow(step, 1, "recon", float(loss.data)))
                    else:
                        loss_mlm = mlm_forward(batch)
                        loss_rec = reconstruction_loss(
                            batch, params, config, training=True, rng=train_rng
                        )
                        loss = loss_mlm + loss_rec
                        log.append(LogRow(step, 2, "mlm", float(loss_mlm.data)))
                        log.append(LogRow(step, 2, "recon", float(loss_rec.data)))
                    tape.backward(loss)
                _step(params, params, state, opt)
                if max_steps is not None and step >= max_steps:
                    done = True
                    break
    return params, log


def masked_token_accuracy(
    sequences: np.ndarray,
    params: dict[str, Tensor],
    config: ModelConfig,
    policy: MaskingPolicy,
    rng: np.random.Generator,
) -> float:
    """Argmax accuracy on masked positions over the given corpus."""
    correct = 0
    total = 0
    corrupted, target_mask = apply_masking(sequences, policy, rng, config.vocab_size)
    states = encode_tokens(corrupted, params, config)
    logits = lm_head(states, params, config)
    pred = logits.data.argmax(axis=-1)
    correct += int(((pred == sequences) & target_mask).sum())
    total += int(target_mask.sum())
    return correct / max(total, 1)


def reconstruction_exact_match(
    smiles_list: Sequence[str],
    params: dict[str, Tensor],
    config: ModelConfig,
    vocab: Vocabulary,
) -> float:
    """Fraction of molecules whose latent round trip decodes back to the
    exact input string."""
    hits = 0
    for smiles in smiles_list:
        z = embed(smiles, params, config, vocab, mode="latent")
        if greedy_decode(z, params, config, vocab) == smiles:
            hits += 1
    return hits / max(len(smiles_list), 1)
