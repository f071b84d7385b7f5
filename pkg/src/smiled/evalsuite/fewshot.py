"""Few-shot embedding arithmetic: combine two molecule embeddings with
the fitted probe, decode the result, and score it against the expected
composition by Tanimoto similarity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..chem import fingerprint, parse, tanimoto
from ..errors import SmilesError, ValenceViolation
from .families import FamilyTriple
from .probe import LinearProbe


@dataclass(frozen=True)
class FewshotResult:
    a: str
    b: str
    expected: str
    decoded: str
    score: float


def tanimoto_to_expected(decoded: str, expected: str) -> float:
    """Fingerprint Tanimoto between the decoded and expected molecules;
    unparseable or invalid decodes score 0 by convention."""
    try:
        got = parse(decoded)
        want = parse(expected)
    except SmilesError:
        return 0.0
    try:
        return tanimoto(fingerprint(got), fingerprint(want))
    except ValenceViolation:
        return 0.0


def fewshot_arithmetic(
    probe: LinearProbe,
    pair: tuple[str, str],
    expected: str,
    embed_fn: Callable[[str], np.ndarray],
    decode_fn: Callable[[np.ndarray], str],
) -> FewshotResult:
    """z-hat = alpha e(a) + beta e(b) + B0, greedily decoded and scored."""
    a, b = pair
    z_hat = probe.predict(embed_fn(a), embed_fn(b))
    decoded = decode_fn(z_hat)
    return FewshotResult(
        a=a, b=b, expected=expected, decoded=decoded,
        score=tanimoto_to_expected(decoded, expected),
    )


def fewshot_sweep(
    probe: LinearProbe,
    triples: Sequence[FamilyTriple],
    embed_fn: Callable[[str], np.ndarray],
    decode_fn: Callable[[np.ndarray], str],
) -> tuple[list[FewshotResult], float]:
    """Run the arithmetic over every triple; returns the per-pair results
    and the mean Tanimoto score."""
    results = [
        fewshot_arithmetic(probe, (t.a, t.b), t.c, embed_fn, decode_fn)
        for t in triples
    ]
    mean_score = float(np.mean([r.score for r in results])) if results else 0.0
    return results, mean_score
