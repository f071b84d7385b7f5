"""End-to-end latent-space study on a trained checkpoint.

For each requested embedding mode: embed the 60 family molecules, fit the
linear probe on one sampled triple per family, validate on the held-out
114, run the few-shot arithmetic with greedy decoding over all triples,
and report R-squared, MSE, and the mean Tanimoto score.  The decode step
always goes through the latent decoder; for mean-pooled embeddings that
is a diagnostic (pooling has no trained inverse, which is the point of
the latent coder).
"""

from __future__ import annotations

import csv
from typing import Sequence

import numpy as np

from ..model import ModelConfig
from ..nn import Tensor, seeded_rng
from ..tokenizer import Vocabulary
from ..training import LATENT, MEAN_POOL, embed, greedy_decode
from .families import generate_families
from .fewshot import fewshot_sweep
from .probe import fit_probe


def latent_space_study(
    params: dict[str, Tensor],
    config: ModelConfig,
    vocab: Vocabulary,
    seed: int,
    modes: Sequence[str] = (LATENT, MEAN_POOL),
) -> dict:
    molecules, triples = generate_families()
    report: dict = {
        "n_molecules": len(molecules),
        "n_triples": len(triples),
        "seed": seed,
        "modes": {},
    }
    for mode in modes:
        cache: dict[str, np.ndarray] = {}

        def embed_fn(smiles: str) -> np.ndarray:
            if smiles not in cache:
                cache[smiles] = embed(smiles, params, config, vocab, mode=mode)
            return cache[smiles]

        def decode_fn(z: np.ndarray) -> str:
            return greedy_decode(z, params, config, vocab)

        probe = fit_probe(triples, embed_fn, seeded_rng(seed))
        results, mean_ts = fewshot_sweep(probe, triples, embed_fn, decode_fn)
        best = sorted(results, key=lambda r: -r.score)[:2]
        report["modes"][mode] = {
            "alpha": probe.alpha,
            "beta": probe.beta,
            "r_squared": probe.r_squared,
            "mse": probe.mse,
            "mean_tanimoto": mean_ts,
            "best_cases": [
                {"a": r.a, "b": r.b, "expected": r.expected,
                 "decoded": r.decoded, "tanimoto": r.score}
                for r in best
            ],
        }
    return report


def dump_embeddings(
    smiles_list: Sequence[str],
    params: dict[str, Tensor],
    config: ModelConfig,
    vocab: Vocabulary,
    path,
    mode: str = LATENT,
) -> None:
    """CSV dump "smiles,e0..e{L-1}" for external projection tools."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["smiles"] + [f"e{i}" for i in range(config.hidden)])
        for smiles in smiles_list:
            vec = embed(smiles, params, config, vocab, mode=mode)
            writer.writerow([smiles] + [f"{v:.8g}" for v in vec])
