"""Chemistry substrate: SMILES parsing, validation, canonicalization,
fingerprints, and scaffolds."""

from .canon import canonicalize
from .fingerprint import DEFAULT_WIDTH, Fingerprint, fingerprint, tanimoto
from .graph import Atom, Bond, MolecularGraph
from .isomorphism import isomorphic
from .parser import parse
from .scaffold import scaffold
from .valence import check_valence, implicit_hydrogens, is_valid, total_hydrogens

__all__ = [
    "Atom",
    "Bond",
    "MolecularGraph",
    "Fingerprint",
    "DEFAULT_WIDTH",
    "parse",
    "check_valence",
    "is_valid",
    "implicit_hydrogens",
    "total_hydrogens",
    "canonicalize",
    "fingerprint",
    "tanimoto",
    "scaffold",
    "isomorphic",
]
