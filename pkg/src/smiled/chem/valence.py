"""Valence checking and implicit-hydrogen assignment.

Bare atoms get hydrogens from the default valence table (lowest allowed
valence >= bond-order sum).  Aromatic bonds count 1.5 toward the sum; an
aromatic atom is matched to the nearest allowed valence within 1.0, which
covers both pi-acceptor atoms (benzene carbon: sum 3.0 -> valence 4, one
hydrogen) and pi-donor heteroatoms (furan oxygen: sum 3.0 -> valence 2,
no hydrogen).  Bracket atoms are taken at face value.
"""

from __future__ import annotations

import math

from ..errors import ValenceViolation
from .graph import BOND_ORDER_VALUE, DEFAULT_VALENCES, MolecularGraph


def bond_order_sum(graph: MolecularGraph, idx: int) -> float:
    return sum(BOND_ORDER_VALUE[b.order] for b in graph.bonds if idx in (b.a, b.b))


def fit_hydrogens(element: str, aromatic: bool, total: float) -> int | None:
    """Hydrogen count a bare atom with bond-order sum ``total`` would get,
    or None when no allowed valence fits."""
    allowed = DEFAULT_VALENCES.get(element)
    if allowed is None:
        return None
    if aromatic:
        best = min(allowed, key=lambda v: (abs(v - total), v))
        if abs(best - total) > 1.0:
            return None
        return max(0, math.floor(best - total + 0.5))
    if total != int(total):
        return None
    fitting = [v for v in allowed if v >= total]
    if not fitting:
        return None
    return int(fitting[0] - total)


def implicit_hydrogens(graph: MolecularGraph, idx: int) -> int:
    """Hydrogen count for atom ``idx``: explicit for bracket atoms, from
    the valence table for bare atoms.  Raises ValenceViolation when no
    allowed valence fits."""
    atom = graph.atoms[idx]
    if atom.bracket:
        return atom.explicit_h or 0
    total = bond_order_sum(graph, idx)
    h = fit_hydrogens(atom.element, atom.aromatic, total)
    if h is None:
        raise ValenceViolation(
            idx,
            f"bond sum {total} fits no allowed valence of {atom.element}",
        )
    return h


def total_hydrogens(graph: MolecularGraph, idx: int) -> int:
    return implicit_hydrogens(graph, idx)


def check_valence(graph: MolecularGraph) -> None:
    """Validate every atom; raises ValenceViolation at the first offender.
    Bracket atoms are accepted as written."""
    for idx in range(len(graph.atoms)):
        implicit_hydrogens(graph, idx)


def is_valid(graph: MolecularGraph) -> bool:
    try:
        check_valence(graph)
    except ValenceViolation:
        return False
    return True
