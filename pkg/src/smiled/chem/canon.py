"""Canonical SMILES generation.

Atom ranks come from iterative invariant refinement seeded by (element,
degree, charge, aromatic flag, hydrogen count).  When refinement leaves a
tied class, the lowest-ranked tied class is split by trying each member
first and keeping the lexicographically smallest resulting string, so the
output is invariant under any renumbering of the input atoms.  Chirality
and bond-direction annotations are dropped from the canonical form.
"""

from __future__ import annotations

import heapq

from .graph import (
    AROMATIC,
    BOND_ORDER_VALUE,
    DOUBLE,
    ORGANIC_SUBSET,
    SINGLE,
    TRIPLE,
    Bond,
    MolecularGraph,
)
from .valence import bond_order_sum, fit_hydrogens, total_hydrogens

_BARE_AROMATIC = frozenset({"B", "C", "N", "O", "P", "S"})


def _densify(keys: dict[int, object]) -> dict[int, int]:
    order = {key: rank for rank, key in enumerate(sorted(set(keys.values())))}
    return {i: order[k] for i, k in keys.items()}


def _refine(
    adj: dict[int, list[tuple[int, Bond]]], keys: dict[int, object]
) -> dict[int, int]:
    """Iterate neighborhood refinement until the partition stabilizes."""
    ranks = _densify(keys)
    while True:
        new_keys = {
            i: (
                ranks[i],
                tuple(
                    sorted((BOND_ORDER_VALUE[b.order], ranks[j]) for j, b in adj[i])
                ),
            )
            for i in ranks
        }
        new_ranks = _densify(new_keys)
        if new_ranks == ranks:
            return ranks
        ranks = new_ranks


def _bond_symbol(bond: Bond, graph: MolecularGraph) -> str:
    both_aromatic = graph.atoms[bond.a].aromatic and graph.atoms[bond.b].aromatic
    if bond.order == SINGLE:
        return "-" if both_aromatic else ""
    if bond.order == AROMATIC:
        return "" if both_aromatic else ":"
    return "=" if bond.order == DOUBLE else "#"


def _atom_token(graph: MolecularGraph, idx: int) -> str:
    atom = graph.atoms[idx]
    h = total_hydrogens(graph, idx)
    symbol = atom.element.lower() if atom.aromatic else atom.element

    bare_allowed = (
        atom.charge == 0
        and atom.element in ORGANIC_SUBSET
        and (not atom.aromatic or atom.element in _BARE_AROMATIC)
    )
    if bare_allowed:
        bare_h = fit_hydrogens(atom.element, atom.aromatic, bond_order_sum(graph, idx))
        if bare_h == h:
            return symbol

    h_part = "" if h == 0 else ("H" if h == 1 else f"H{h}")
    if atom.charge == 0:
        charge_part = ""
    elif atom.charge in (1, -1):
        charge_part = "+" if atom.charge == 1 else "-"
    else:
        charge_part = f"{atom.charge:+d}"
    return f"[{symbol}{h_part}{charge_part}]"


def _write_component(
    graph: MolecularGraph, comp: list[int], ranks: dict[int, int]
) -> str:
    adj = {i: [] for i in comp}
    comp_set = set(comp)
    for bond in graph.bonds:
        if bond.a in comp_set and bond.b in comp_set:
            adj[bond.a].append((bond.b, bond))
            adj[bond.b].append((bond.a, bond))
    for i in comp:
        adj[i].sort(key=lambda t: ranks[t[0]])

    root = min(comp, key=lambda i: ranks[i])

    # Classify edges into spanning tree and ring closures with a
    # depth-first walk that visits lower-ranked neighbors first.
    children: dict[int, list[tuple[int, Bond]]] = {i: [] for i in comp}
    ring_at: dict[int, list[tuple[int, Bond]]] = {i: [] for i in comp}
    ring_seen: set[tuple[int, int]] = set()
    visited: set[int] = set()

    def classify(i: int, parent_bond: Bond | None) -> None:
        visited.add(i)
        for j, b in adj[i]:
            if b is parent_bond:
                continue
            if j in visited:
                pair = (min(i, j), max(i, j))
                if pair not in ring_seen:
                    ring_seen.add(pair)
                    ring_at[i].append((j, b))
                    ring_at[j].append((i, b))
            else:
                children[i].append((j, b))
                classify(j, b)

    classify(root, None)
    for i in comp:
        ring_at[i].sort(key=lambda t: ranks[t[0]])

    # Ring digits: smallest free digit at the opening atom, released when
    # closed.  The emit order follows dfs_order, which is deterministic.
    digits: dict[tuple[int, int], int] = {}
    free: list[int] = list(range(1, 100))
    heapq.heapify(free)

    def ring_token(i: int, j: int, bond: Bond) -> str:
        pair = (min(i, j), max(i, j))
        if pair in digits:
            digit = digits.pop(pair)
            heapq.heappush(free, digit)
        else:
            digit = heapq.heappop(free)
            digits[pair] = digit
        text = str(digit) if digit < 10 else f"%{digit:02d}"
        return _bond_symbol(bond, graph) + text

    out: list[str] = []

    def emit(i: int) -> None:
        out.append(_atom_token(graph, i))
        for j, b in ring_at[i]:
            out.append(ring_token(i, j, b))
        kids = children[i]
        for j, b in kids[:-1]:
            out.append("(" + _bond_symbol(b, graph))
            emit(j)
            out.append(")")
        if kids:
            j, b = kids[-1]
            out.append(_bond_symbol(b, graph))
            emit(j)

    emit(root)
    return "".join(out)


def _initial_keys(graph: MolecularGraph, comp: list[int]) -> dict[int, object]:
    keys: dict[int, object] = {}
    for i in comp:
        atom = graph.atoms[i]
        keys[i] = (
            atom.element,
            graph.degree(i),
            atom.charge,
            atom.aromatic,
            total_hydrogens(graph, i),
        )
    return keys


def _best_string(
    graph: MolecularGraph,
    comp: list[int],
    adj: dict[int, list[tuple[int, Bond]]],
    ranks: dict[int, int],
) -> str:
    by_rank: dict[int, list[int]] = {}
    for i, r in ranks.items():
        by_rank.setdefault(r, []).append(i)
    tied = [r for r, members in by_rank.items() if len(members) > 1]
    if not tied:
        return _write_component(graph, comp, ranks)

    # Split the lowest tied class: try each member as the distinguished
    # one and keep the smallest resulting string, which makes the choice
    # independent of input numbering.
    split_rank = min(tied)
    best: str | None = None
    for chosen in by_rank[split_rank]:
        keys = {i: (r, int(i != chosen)) for i, r in ranks.items()}
        candidate = _best_string(graph, comp, adj, _refine(adj, keys))
        if best is None or candidate < best:
            best = candidate
    assert best is not None
    return best


def canonicalize(graph: MolecularGraph) -> str:
    """Canonical SMILES: identical for any atom renumbering of the same
    graph.  Multi-component graphs canonicalize per component and join the
    sorted pieces with '.'.  The graph must already be valence-checked."""
    pieces = []
    for comp in graph.components():
        comp_set = set(comp)
        adj: dict[int, list[tuple[int, Bond]]] = {i: [] for i in comp}
        for bond in graph.bonds:
            if bond.a in comp_set and bond.b in comp_set:
                adj[bond.a].append((bond.b, bond))
                adj[bond.b].append((bond.a, bond))
        ranks = _refine(adj, _initial_keys(graph, comp))
        pieces.append(_best_string(graph, comp, adj, ranks))
    return ".".join(sorted(pieces))
