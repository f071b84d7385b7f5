"""Scaffold extraction: prune terminal atoms until only ring systems and
their linkers remain.  Acyclic molecules reduce to an empty graph."""

from __future__ import annotations

from .graph import MolecularGraph


def scaffold(graph: MolecularGraph) -> MolecularGraph:
    """Iteratively delete atoms of degree <= 1; ring atoms always keep
    degree >= 2, so the fixed point is the ring systems plus linkers."""
    keep = set(range(len(graph.atoms)))
    degree = {i: 0 for i in keep}
    for bond in graph.bonds:
        degree[bond.a] += 1
        degree[bond.b] += 1
    adj = graph.adjacency()

    frontier = [i for i in keep if degree[i] <= 1]
    while frontier:
        nxt = []
        for i in frontier:
            if i not in keep:
                continue
            keep.discard(i)
            for j, _ in adj[i]:
                if j in keep:
                    degree[j] -= 1
                    if degree[j] <= 1:
                        nxt.append(j)
        frontier = nxt

    return graph.subgraph(sorted(keep))
