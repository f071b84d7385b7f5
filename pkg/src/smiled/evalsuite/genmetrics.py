"""Generation quality metrics over SMILES lists.

validity    fraction that parses and passes the valence check
uniqueness  unique canonical fraction among the valid
novelty     fraction of the unique set absent from the reference
SNN         mean over valid generated of max Tanimoto to the reference
IntDiv      1 - mean pairwise Tanimoto among valid generated (full
            similarity matrix, diagonal included)
Scaf        cosine similarity between scaffold-count vectors
"""

from __future__ import annotations

from collections import Counter
from typing import Sequence

import numpy as np

from ..chem import canonicalize, check_valence, fingerprint, parse, scaffold, tanimoto
from ..errors import EmptyInput, SmilesError, ValenceViolation


def _canonical_or_none(smiles: str) -> str | None:
    try:
        graph = parse(smiles)
        check_valence(graph)
    except (SmilesError, ValenceViolation):
        return None
    return canonicalize(graph)


def _scaffold_counts(canonicals: Sequence[str]) -> Counter:
    counts: Counter = Counter()
    for smi in canonicals:
        counts[canonicalize(scaffold(parse(smi)))] += 1
    return counts


def _cosine(a: Counter, b: Counter) -> float:
    keys = set(a) | set(b)
    va = np.array([a.get(k, 0) for k in keys], dtype=np.float64)
    vb = np.array([b.get(k, 0) for k in keys], dtype=np.float64)
    na, nb = np.linalg.norm(va), np.linalg.norm(vb)
    if na == 0 or nb == 0:
        return 0.0
    return float(va @ vb / (na * nb))


def generation_metrics(
    generated: Sequence[str], reference: Sequence[str]
) -> dict[str, float]:
    """MOSES-style metric subset; all values lie in [0, 1]."""
    if not generated or not reference:
        raise EmptyInput("generated and reference lists must be non-empty")

    valid = [c for c in (_canonical_or_none(s) for s in generated) if c is not None]
    validity = len(valid) / len(generated)

    unique = list(dict.fromkeys(valid))
    uniqueness = len(unique) / len(valid) if valid else 0.0

    ref_canonical = [
        c for c in (_canonical_or_none(s) for s in reference) if c is not None
    ]
    ref_set = set(ref_canonical)
    novel = [c for c in unique if c not in ref_set]
    novelty = len(novel) / len(unique) if unique else 0.0

    if valid and ref_canonical:
        gen_fps = [fingerprint(parse(c)) for c in valid]
        ref_fps = [fingerprint(parse(c)) for c in ref_canonical]
        snn = float(
            np.mean([max(tanimoto(g, r) for r in ref_fps) for g in gen_fps])
        )
        pairwise = np.array(
            [[tanimoto(gi, gj) for gj in gen_fps] for gi in gen_fps]
        )
        intdiv = 1.0 - float(pairwise.mean())
        scaf = _cosine(_scaffold_counts(valid), _scaffold_counts(ref_canonical))
    else:
        snn, intdiv, scaf = 0.0, 0.0, 0.0

    return {
        "validity": validity,
        "uniqueness": uniqueness,
        "novelty": novelty,
        "SNN": snn,
        "Scaf": scaf,
        "IntDiv": intdiv,
    }
