"""Molecular graph types: atoms, bonds, and the graph container.

A graph may hold several disconnected components (a ``.``-separated SMILES
parses into one graph); ``components()`` splits them back apart.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

SINGLE = "single"
DOUBLE = "double"
TRIPLE = "triple"
AROMATIC = "aromatic"

BOND_ORDER_VALUE = {SINGLE: 1.0, DOUBLE: 2.0, TRIPLE: 3.0, AROMATIC: 1.5}

# Elements accepted by the parser.  Bare (non-bracket) atoms are further
# restricted to ORGANIC_SUBSET.
SUPPORTED_ELEMENTS = frozenset(
    """H He Li Be B C N O F Ne Na Mg Al Si P S Cl Ar K Ca Sc Ti V Cr Mn Fe
    Co Ni Cu Zn Ga Ge As Se Br Kr Rb Sr Zr Mo Ru Rh Pd Ag Cd In Sn Sb Te I
    Xe Cs Ba W Pt Au Hg Tl Pb Bi""".split()
)

ORGANIC_SUBSET = frozenset({"B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"})

# Elements that may carry the aromatic flag (written lowercase).
AROMATIC_ELEMENTS = frozenset({"B", "C", "N", "O", "P", "S", "Se", "As"})

# Default valences used for implicit-hydrogen counting on bare atoms.
DEFAULT_VALENCES = {
    "B": (3,),
    "C": (4,),
    "N": (3,),
    "O": (2,),
    "P": (3, 5),
    "S": (2, 4, 6),
    "F": (1,),
    "Cl": (1,),
    "Br": (1,),
    "I": (1,),
}


@dataclass
class Atom:
    """One atom.  ``explicit_h`` is set only for bracket atoms; bare atoms
    get their hydrogen count from the valence table.  ``chiral`` keeps the
    ``@``/``@@`` annotation verbatim; it plays no role in canonical ranking."""

    element: str
    charge: int = 0
    aromatic: bool = False
    explicit_h: int | None = None
    bracket: bool = False
    chiral: str | None = None


@dataclass
class Bond:
    """Bond between atom indices ``a`` and ``b`` (unordered pair).
    ``direction`` keeps ``/`` or ``\\`` verbatim; ignored by canonical
    ranking."""

    a: int
    b: int
    order: str = SINGLE
    direction: str | None = None

    def other(self, idx: int) -> int:
        return self.b if idx == self.a else self.a


@dataclass
class MolecularGraph:
    atoms: list[Atom] = field(default_factory=list)
    bonds: list[Bond] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.atoms)

    def adjacency(self) -> list[list[tuple[int, Bond]]]:
        """Neighbor lists: for each atom, (neighbor index, bond) pairs."""
        adj: list[list[tuple[int, Bond]]] = [[] for _ in self.atoms]
        for bond in self.bonds:
            adj[bond.a].append((bond.b, bond))
            adj[bond.b].append((bond.a, bond))
        return adj

    def degree(self, idx: int) -> int:
        return sum(1 for b in self.bonds if idx in (b.a, b.b))

    def components(self) -> list[list[int]]:
        """Connected components as sorted atom-index lists, in order of
        their smallest atom index."""
        adj = self.adjacency()
        seen = [False] * len(self.atoms)
        comps = []
        for start in range(len(self.atoms)):
            if seen[start]:
                continue
            stack, comp = [start], []
            seen[start] = True
            while stack:
                i = stack.pop()
                comp.append(i)
                for j, _ in adj[i]:
                    if not seen[j]:
                        seen[j] = True
                        stack.append(j)
            comps.append(sorted(comp))
        return comps

    def subgraph(self, indices: list[int]) -> "MolecularGraph":
        """Induced subgraph on ``indices`` (atoms are copied, reindexed in
        the given order)."""
        remap = {old: new for new, old in enumerate(indices)}
        atoms = [replace(self.atoms[i]) for i in indices]
        bonds = [
            Bond(remap[b.a], remap[b.b], b.order, b.direction)
            for b in self.bonds
            if b.a in remap and b.b in remap
        ]
        return MolecularGraph(atoms, bonds)

    def permuted(self, perm: list[int]) -> "MolecularGraph":
        """Renumbered copy: atom at old index ``i`` moves to ``perm[i]``."""
        n = len(self.atoms)
        atoms: list[Atom] = [None] * n  # type: ignore[list-item]
        for i, atom in enumerate(self.atoms):
            atoms[perm[i]] = replace(atom)
        bonds = [Bond(perm[b.a], perm[b.b], b.order, b.direction) for b in self.bonds]
        return MolecularGraph(atoms, bonds)
