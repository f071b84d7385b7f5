"""Path-based hashed fingerprints and Tanimoto similarity.

Every simple path of 0..7 bonds is rendered as an element/bond-order
string (direction-normalized so the path set does not depend on atom
numbering), hashed with 64-bit FNV-1a, and folded into a fixed-width bit
set.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import WidthMismatch
from .graph import AROMATIC, DOUBLE, SINGLE, TRIPLE, MolecularGraph

MAX_PATH_BONDS = 7
DEFAULT_WIDTH = 2048

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_BOND_CHAR = {SINGLE: "-", DOUBLE: "=", TRIPLE: "#", AROMATIC: ":"}


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


@dataclass(frozen=True)
class Fingerprint:
    width: int
    bits: frozenset[int]


def _atom_label(graph: MolecularGraph, idx: int) -> str:
    atom = graph.atoms[idx]
    label = atom.element.lower() if atom.aromatic else atom.element
    if atom.charge:
        label += f"{atom.charge:+d}"
    return label


def _path_labels(graph: MolecularGraph) -> set[str]:
    adj = graph.adjacency()
    labels: set[str] = set()

    def extend(path: list[int], text_parts: list[str]) -> None:
        forward = "".join(text_parts)
        labels.add(min(forward, forward[::-1]))
        if (len(path) - 1) >= MAX_PATH_BONDS:
            return
        tail = path[-1]
        on_path = set(path)
        for j, bond in adj[tail]:
            if j in on_path:
                continue
            text_parts.append(_BOND_CHAR[bond.order])
            text_parts.append(_atom_label(graph, j))
            path.append(j)
            extend(path, text_parts)
            path.pop()
            text_parts.pop()
            text_parts.pop()

    for start in range(len(graph.atoms)):
        extend([start], [_atom_label(graph, start)])
    return labels


def fingerprint(graph: MolecularGraph, width: int = DEFAULT_WIDTH) -> Fingerprint:
    """Hash all simple paths up to 7 bonds into a ``width``-bit set."""
    if width <= 0:
        raise ValueError("fingerprint width must be positive")
    bits = {fnv1a64(label.encode()) % width for label in _path_labels(graph)}
    return Fingerprint(width=width, bits=frozenset(bits))


def tanimoto(a: Fingerprint, b: Fingerprint) -> float:
    """|a & b| / |a | b|; two empty fingerprints count as identical."""
    if a.width != b.width:
        raise WidthMismatch(f"widths differ: {a.width} vs {b.width}")
    union = a.bits | b.bits
    if not union:
        return 1.0
    return len(a.bits & b.bits) / len(union)
