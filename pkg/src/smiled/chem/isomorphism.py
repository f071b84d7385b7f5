"""Exact graph isomorphism for small molecules.

Atoms match on (element, charge, aromatic flag, total hydrogen count);
bonds match on order.  Backtracking search with signature pruning --
intended for verification on molecules of a few dozen atoms.
"""

from __future__ import annotations

from .graph import BOND_ORDER_VALUE, MolecularGraph
from .valence import total_hydrogens


def _signatures(graph: MolecularGraph) -> list[tuple]:
    sigs = []
    adj = graph.adjacency()
    for i, atom in enumerate(graph.atoms):
        incident = tuple(sorted(BOND_ORDER_VALUE[b.order] for _, b in adj[i]))
        sigs.append(
            (atom.element, atom.charge, atom.aromatic, total_hydrogens(graph, i), incident)
        )
    return sigs


def isomorphic(g1: MolecularGraph, g2: MolecularGraph) -> bool:
    """True when the graphs match under some atom renumbering."""
    if len(g1.atoms) != len(g2.atoms) or len(g1.bonds) != len(g2.bonds):
        return False
    sig1, sig2 = _signatures(g1), _signatures(g2)
    if sorted(sig1) != sorted(sig2):
        return False

    n = len(g1.atoms)
    adj1 = {}
    for b in g1.bonds:
        adj1[(b.a, b.b)] = b.order
        adj1[(b.b, b.a)] = b.order
    adj2 = {}
    for b in g2.bonds:
        adj2[(b.a, b.b)] = b.order
        adj2[(b.b, b.a)] = b.order

    candidates = [
        [j for j in range(n) if sig2[j] == sig1[i]] for i in range(n)
    ]
    # Assign most-constrained atoms first.
    order = sorted(range(n), key=lambda i: len(candidates[i]))
    mapping: dict[int, int] = {}
    used = [False] * n

    def assign(pos: int) -> bool:
        if pos == n:
            return True
        i = order[pos]
        for j in candidates[i]:
            if used[j]:
                continue
            ok = True
            for i2, j2 in mapping.items():
                if adj1.get((i, i2)) != adj2.get((j, j2)):
                    ok = False
                    break
            if ok:
                mapping[i] = j
                used[j] = True
                if assign(pos + 1):
                    return True
                del mapping[i]
                used[j] = False
        return False

    return assign(0)
