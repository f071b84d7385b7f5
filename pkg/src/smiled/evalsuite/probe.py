"""Linear compositionality probe over molecule embeddings.

Fits scalars alpha, beta and an intercept vector B0 so that
alpha * e(a) + beta * e(b) + B0 approximates e(c) over one sampled triple
per family, then validates on the held-out triples.  R-squared pools all
embedding coordinates into a single score.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..errors import DegenerateSystem
from .families import FAMILY_TAGS, FamilyTriple


@dataclass(frozen=True)
class LinearProbe:
    alpha: float
    beta: float
    intercept: np.ndarray
    r_squared: float
    mse: float

    def predict(self, ea: np.ndarray, eb: np.ndarray) -> np.ndarray:
        return self.alpha * ea + self.beta * eb + self.intercept


def sample_fit_triples(
    triples: Sequence[FamilyTriple], rng: np.random.Generator
) -> list[FamilyTriple]:
    """One random triple per family."""
    chosen = []
    for fam in FAMILY_TAGS:
        members = [t for t in triples if t.family == fam]
        chosen.append(members[rng.integers(len(members))])
    return chosen


def _solve(ea: np.ndarray, eb: np.ndarray, ec: np.ndarray) -> tuple[float, float, np.ndarray]:
    """Least squares for alpha, beta, B0 over stacked vector equations.

    With B0 eliminated (it absorbs the means), alpha and beta solve the
    2x2 normal equations on the centered embeddings.
    """
    ea_c = ea - ea.mean(axis=0)
    eb_c = eb - eb.mean(axis=0)
    ec_c = ec - ec.mean(axis=0)
    gram = np.array(
        [
            [(ea_c * ea_c).sum(), (ea_c * eb_c).sum()],
            [(ea_c * eb_c).sum(), (eb_c * eb_c).sum()],
        ]
    )
    rhs = np.array([(ea_c * ec_c).sum(), (eb_c * ec_c).sum()])
    det = np.linalg.det(gram)
    scale = max(float(np.abs(gram).max()), 1e-30)
    if abs(det) < 1e-12 * scale**2:
        raise DegenerateSystem(
            f"probe design matrix is rank-deficient (det={det:.3e})"
        )
    alpha, beta = np.linalg.solve(gram, rhs)
    intercept = ec.mean(axis=0) - alpha * ea.mean(axis=0) - beta * eb.mean(axis=0)
    return float(alpha), float(beta), intercept


def fit_probe(
    triples: Sequence[FamilyTriple],
    embed_fn: Callable[[str], np.ndarray],
    rng: np.random.Generator,
) -> LinearProbe:
    """Fit on one sampled triple per family, validate on the rest."""
    fit_set = sample_fit_triples(triples, rng)
    held_out = [t for t in triples if t not in fit_set]

    def stack(ts: Sequence[FamilyTriple]):
        ea = np.stack([embed_fn(t.a) for t in ts])
        eb = np.stack([embed_fn(t.b) for t in ts])
        ec = np.stack([embed_fn(t.c) for t in ts])
        return ea, eb, ec

    alpha, beta, intercept = _solve(*stack(fit_set))

    ea, eb, ec = stack(held_out)
    pred = alpha * ea + beta * eb + intercept
    residual = ec - pred
    ss_res = float((residual**2).sum())
    centered = ec - ec.mean(axis=0)
    ss_tot = float((centered**2).sum())
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else (1.0 if ss_res == 0 else 0.0)
    mse = ss_res / ec.size
    return LinearProbe(
        alpha=alpha, beta=beta, intercept=intercept, r_squared=r_squared, mse=mse
    )
