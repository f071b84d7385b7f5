"""SMILES string -> molecular graph.

Handles the core grammar: bare organic-subset atoms, aromatic lowercase
atoms, bracket atoms with isotope/chirality/H-count/charge, bond symbols
(``- = # :`` plus the directional ``/ \\``), branches, single- and
two-digit ring closures, and ``.``-separated components.  Isotope and
atom-map annotations are accepted and dropped.  Every error names the
offset of the offending character.
"""

from __future__ import annotations

import re

from ..errors import (
    MalformedBracketAtom,
    SmilesSyntaxError,
    UnbalancedParenthesis,
    UnclosedRingBond,
    UnknownElement,
)
from .graph import (
    AROMATIC,
    AROMATIC_ELEMENTS,
    DOUBLE,
    ORGANIC_SUBSET,
    SINGLE,
    SUPPORTED_ELEMENTS,
    TRIPLE,
    Atom,
    Bond,
    MolecularGraph,
)

_BOND_SYMBOLS = {"-": SINGLE, "=": DOUBLE, "#": TRIPLE, ":": AROMATIC}
_AROMATIC_LOWER = {"b", "c", "n", "o", "p", "s"}

_BRACKET_RE = re.compile(
    r"^(?P<isotope>\d+)?"
    r"(?P<symbol>[A-Z][a-z]?|as|se|[bcnops])"
    r"(?P<chiral>@{1,2})?"
    r"(?P<hcount>H\d*)?"
    r"(?P<charge>\+\d+|-\d+|\++|-+)?"
    r"(?::\d+)?$"
)


def _parse_bracket(content: str, offset: int) -> Atom:
    """Parse the inside of ``[...]`` starting at string offset ``offset``."""
    match = _BRACKET_RE.match(content)
    if match is None:
        raise MalformedBracketAtom(f"cannot parse bracket atom [{content}]", offset)
    symbol = match.group("symbol")
    aromatic = symbol[0].islower()
    element = symbol.capitalize() if aromatic else symbol
    if element not in SUPPORTED_ELEMENTS:
        raise UnknownElement(f"unknown element {symbol!r}", offset)
    if aromatic and element not in AROMATIC_ELEMENTS:
        raise MalformedBracketAtom(f"element {element} cannot be aromatic", offset)

    hcount = match.group("hcount")
    explicit_h = 0
    if hcount is not None:
        explicit_h = 1 if hcount == "H" else int(hcount[1:])

    charge_text = match.group("charge")
    charge = 0
    if charge_text:
        if charge_text[0] == "+":
            charge = int(charge_text[1:]) if charge_text[1:].isdigit() else len(charge_text)
        else:
            charge = -(int(charge_text[1:]) if charge_text[1:].isdigit() else len(charge_text))

    return Atom(
        element=element,
        charge=charge,
        aromatic=aromatic,
        explicit_h=explicit_h,
        bracket=True,
        chiral=match.group("chiral"),
    )


def parse(smiles: str) -> MolecularGraph:
    """Parse a SMILES string into a molecular graph.

    Raises UnbalancedParenthesis, UnclosedRingBond, UnknownElement,
    MalformedBracketAtom, or SmilesSyntaxError, each carrying the offset
    of the problem character.
    """
    if not smiles:
        raise SmilesSyntaxError("empty SMILES", 0)

    graph = MolecularGraph()
    prev_atom: int | None = None
    # branch stack entries: (atom index restored on ')', offset of '(')
    branch_stack: list[tuple[int | None, int]] = []
    # open ring closures: digit -> (atom index, pending bond symbol, offset)
    ring_open: dict[int, tuple[int, str | None, int]] = {}
    pending_bond: str | None = None  # explicit symbol seen since last atom
    pending_dir: str | None = None
    bond_offset = 0
    seen_pairs: set[tuple[int, int]] = set()

    def add_bond(a: int, b: int, symbol: str | None, direction: str | None, offset: int) -> None:
        if a == b:
            raise SmilesSyntaxError("ring closure bonds an atom to itself", offset)
        pair = (min(a, b), max(a, b))
        if pair in seen_pairs:
            raise SmilesSyntaxError("duplicate bond between the same atoms", offset)
        seen_pairs.add(pair)
        if symbol is None:
            both_aromatic = graph.atoms[a].aromatic and graph.atoms[b].aromatic
            order = AROMATIC if both_aromatic else SINGLE
        else:
            order = _BOND_SYMBOLS[symbol]
        graph.bonds.append(Bond(a, b, order, direction))

    def attach(atom: Atom, offset: int) -> None:
        nonlocal prev_atom, pending_bond, pending_dir
        graph.atoms.append(atom)
        idx = len(graph.atoms) - 1
        if prev_atom is not None:
            add_bond(prev_atom, idx, pending_bond, pending_dir, offset)
        elif pending_bond is not None or pending_dir is not None:
            raise SmilesSyntaxError("bond symbol with no preceding atom", bond_offset)
        prev_atom = idx
        pending_bond = None
        pending_dir = None

    i = 0
    n = len(smiles)
    while i < n:
        ch = smiles[i]

        if ch == "(":
            if prev_atom is None:
                raise SmilesSyntaxError("branch opens before any atom", i)
            if pending_bond is not None or pending_dir is not None:
                raise SmilesSyntaxError("bond symbol before '('", bond_offset)
            branch_stack.append((prev_atom, i))
            i += 1
        elif ch == ")":
            if not branch_stack:
                raise UnbalancedParenthesis("')' without matching '('", i)
            if pending_bond is not None or pending_dir is not None:
                raise SmilesSyntaxError("dangling bond symbol before ')'", bond_offset)
            prev_atom = branch_stack.pop()[0]
            i += 1
        elif ch in _BOND_SYMBOLS:
            if pending_bond is not None:
                raise SmilesSyntaxError("two bond symbols in a row", i)
            pending_bond = ch
            bond_offset = i
            i += 1
        elif ch in "/\\":
            if pending_dir is not None or pending_bond is not None:
                raise SmilesSyntaxError("conflicting bond annotations", i)
            pending_dir = ch
            bond_offset = i
            i += 1
        elif ch == ".":
            if pending_bond is not None or pending_dir is not None:
                raise SmilesSyntaxError("bond symbol before '.'", bond_offset)
            prev_atom = None
            i += 1
        elif ch.isdigit() or ch == "%":
            if ch == "%":
                if i + 2 >= n or not smiles[i + 1 : i + 3].isdigit():
                    raise SmilesSyntaxError("'%' needs two digits", i)
                digit = int(smiles[i + 1 : i + 3])
                width = 3
            else:
                digit = int(ch)
                width = 1
            if prev_atom is None:
                raise SmilesSyntaxError("ring closure before any atom", i)
            if digit in ring_open:
                open_atom, open_bond, _ = ring_open.pop(digit)
                symbol = pending_bond
                if open_bond is not None and symbol is not None and open_bond != symbol:
                    raise SmilesSyntaxError("ring bond symbols disagree", i)
                add_bond(prev_atom, open_atom, symbol or open_bond, pending_dir, i)
                pending_bond = None
                pending_dir = None
            else:
                ring_open[digit] = (prev_atom, pending_bond, i)
                pending_bond = None
                pending_dir = None
            i += width
        elif ch == "[":
            end = smiles.find("]", i)
            if end < 0:
                raise MalformedBracketAtom("'[' without closing ']'", i)
            attach(_parse_bracket(smiles[i + 1 : end], i), i)
            i = end + 1
        elif ch in _AROMATIC_LOWER:
            attach(Atom(element=ch.upper(), aromatic=True), i)
            i += 1
        elif ch.isupper():
            symbol = ch
            if i + 1 < n and ch + smiles[i + 1] in ("Cl", "Br"):
                symbol = ch + smiles[i + 1]
            if symbol not in ORGANIC_SUBSET:
                raise UnknownElement(
                    f"{symbol!r} is not in the organic subset; bracket it", i
                )
            attach(Atom(element=symbol), i)
            i += len(symbol)
        else:
            raise SmilesSyntaxError(f"unexpected character {ch!r}", i)

    if branch_stack:
        raise UnbalancedParenthesis("'(' never closed", branch_stack[-1][1])
    if ring_open:
        digit, (_, _, offset) = min(ring_open.items(), key=lambda kv: kv[1][2])
        raise UnclosedRingBond(f"ring bond {digit} never closed", offset)
    if pending_bond is not None or pending_dir is not None:
        raise SmilesSyntaxError("trailing bond symbol", bond_offset)
    return graph
