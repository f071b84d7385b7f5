"""Shared fixtures and generators.

``desk_model`` trains the small overfit model once per session; the
acceptance suite and the latent-space harness tests reuse it.
"""

from __future__ import annotations

import numpy as np
import pytest

from smiled.chem.graph import Atom, Bond, MolecularGraph
from smiled.model import ModelConfig
from smiled.tokenizer import Vocabulary, build_vocab
from smiled.training import (
    MaskingPolicy,
    OptimizerSettings,
    PretrainSchedule,
    encode_corpus,
    pretrain,
)

# 32 training molecules chosen so that masked positions stay inferable:
# same-token-length pairs differ at several positions, and lengths are
# otherwise unique, so the bidirectional context identifies the molecule.
OVERFIT_CORPUS = (
    ["C" * i + "O" for i in (1, 3, 5, 7, 9, 11, 13, 15)]
    + ["C" * i + "N" for i in (2, 4, 6, 8, 10, 12, 14, 16)]
    + ["C" * i + "S" for i in (17, 19, 21)]
    + ["C" * i + "P" for i in (18, 20, 22)]
    + [
        "c1ccccc1",
        "Cc1ccccc1",
        "c1ccoc1",
        "CC(N)=O",
        "CC(C)O",
        "C=C",
        "N#CC#N",
        "CCc1ccccc1",
        "OC(=O)c1ccccc1",
        "CCCCC(=O)O",
    ]
)

DESK_SEED = 7


def desk_config(vocab_size: int) -> ModelConfig:
    return ModelConfig(
        vocab_size=vocab_size,
        max_len=32,
        hidden=64,
        heads=4,
        layers=2,
        dropout=0.0,
        feature_dim=16,
    )


def train_desk_model(max_steps: int = 2000):
    """Train the shared overfit model; returns (params, config, vocab,
    molecules, log)."""
    vocab = build_vocab(OVERFIT_CORPUS)
    config = desk_config(len(vocab))
    sequences = encode_corpus(OVERFIT_CORPUS, vocab, config.max_len)
    params, log = pretrain(
        sequences,
        config,
        PretrainSchedule(250, 250),
        OptimizerSettings(lr=2e-3, batch_size=8),
        seed=DESK_SEED,
        policy=MaskingPolicy(),
        max_steps=max_steps,
    )
    return params, config, vocab, list(OVERFIT_CORPUS), log


@pytest.fixture(scope="session")
def desk_model():
    return train_desk_model()


# ---------------------------------------------------------------------------
# random valid molecular graphs for canonicalization property tests

_ELEMENT_POOL = [
    ("C", 4), ("C", 4), ("C", 4), ("C", 4),
    ("N", 3), ("O", 2), ("S", 2), ("P", 3), ("F", 1), ("Cl", 1), ("Br", 1),
]

_AROMATIC_TEMPLATES = (
    "c1ccccc1",
    "c1ccncc1",
    "c1ccoc1",
    "c1ccsc1",
    "c1cc[nH]c1",
)


def random_molecule(rng: np.random.Generator, n_atoms: int | None = None) -> MolecularGraph:
    """Random valence-valid graph (usually connected, occasionally
    multi-component when halogens saturate early): a bonded tree over a
    random element draw, plus an occasional ring-closing bond."""
    n = int(n_atoms if n_atoms is not None else rng.integers(2, 13))
    picks = [_ELEMENT_POOL[rng.integers(len(_ELEMENT_POOL))] for _ in range(n)]
    atoms = [Atom(element=el) for el, _ in picks]
    capacity = [val for _, val in picks]
    graph = MolecularGraph(atoms=atoms, bonds=[])

    for i in range(1, n):
        parents = [j for j in range(i) if capacity[j] >= 1]
        if not parents:
            continue  # everything saturated: this atom starts a new component
        j = int(parents[rng.integers(len(parents))])
        order_cap = min(capacity[i], capacity[j], 3)
        order_val = 1
        if order_cap >= 2 and rng.random() < 0.2:
            order_val = 2 if order_cap == 2 or rng.random() < 0.8 else 3
        kind = {1: "single", 2: "double", 3: "triple"}[order_val]
        graph.bonds.append(Bond(j, i, kind))
        capacity[i] -= order_val
        capacity[j] -= order_val

    # Maybe close one ring with a single bond between non-adjacent atoms.
    if n >= 4 and rng.random() < 0.5:
        bonded = {(min(b.a, b.b), max(b.a, b.b)) for b in graph.bonds}
        options = [
            (i, j)
            for i in range(n)
            for j in range(i + 2, n)
            if capacity[i] >= 1 and capacity[j] >= 1 and (i, j) not in bonded
        ]
        if options:
            i, j = options[rng.integers(len(options))]
            graph.bonds.append(Bond(i, j, "single"))
            capacity[i] -= 1
            capacity[j] -= 1
    return graph


def random_aromatic_smiles(rng: np.random.Generator) -> str:
    return _AROMATIC_TEMPLATES[rng.integers(len(_AROMATIC_TEMPLATES))]
