"""SMILES grammar coverage and error offsets."""

import pytest

from smiled.chem import parse
from smiled.chem.graph import AROMATIC, DOUBLE, SINGLE, TRIPLE
from smiled.errors import (
    MalformedBracketAtom,
    SmilesSyntaxError,
    UnbalancedParenthesis,
    UnclosedRingBond,
    UnknownElement,
)


class TestBasicParsing:
    def test_single_atom(self):
        g = parse("C")
        assert len(g.atoms) == 1 and len(g.bonds) == 0
        assert g.atoms[0].element == "C" and not g.atoms[0].aromatic

    def test_acetic_acid(self):
        g = parse("CC(=O)O")
        assert len(g.atoms) == 4 and len(g.bonds) == 3
        doubles = [b for b in g.bonds if b.order == DOUBLE]
        assert len(doubles) == 1
        ends = {g.atoms[doubles[0].a].element, g.atoms[doubles[0].b].element}
        assert ends == {"C", "O"}

    def test_bond_symbols(self):
        g = parse("C#N")
        assert g.bonds[0].order == TRIPLE
        g = parse("C=C")
        assert g.bonds[0].order == DOUBLE
        g = parse("C-C")
        assert g.bonds[0].order == SINGLE

    def test_two_letter_halogens(self):
        g = parse("ClCBr")
        assert [a.element for a in g.atoms] == ["Cl", "C", "Br"]

    def test_branching(self):
        g = parse("CC(C)(C)C")  # neopentane
        center = [i for i in range(5) if g.degree(i) == 4]
        assert len(center) == 1

    def test_ring_closure(self):
        g = parse("C1CCCCC1")
        assert len(g.bonds) == 6
        assert all(g.degree(i) == 2 for i in range(6))

    def test_two_digit_ring_closure(self):
        g = parse("C%10CCCCC%10")
        assert len(g.bonds) == 6

    def test_ring_bond_order_on_either_side(self):
        assert parse("C=1CCCCC1").bonds[-1].order == DOUBLE
        assert parse("C1CCCCC=1").bonds[-1].order == DOUBLE

    def test_aromatic_atoms_flagged(self):
        g = parse("c1ccccc1")
        assert all(a.aromatic for a in g.atoms)
        assert all(b.order == AROMATIC for b in g.bonds)

    def test_multi_component(self):
        g = parse("CCO.C")
        comps = g.components()
        assert sorted(len(c) for c in comps) == [1, 3]

    def test_stereo_annotations_preserved(self):
        g = parse("C[C@@H](N)O")
        assert g.atoms[1].chiral == "@@"
        g = parse("F/C=C/F")
        directions = [b.direction for b in g.bonds]
        assert directions.count("/") == 2


class TestBracketAtoms:
    def test_charge_forms(self):
        assert parse("[O-]").atoms[0].charge == -1
        assert parse("[N+]").atoms[0].charge == 1
        assert parse("[Ca+2]").atoms[0].charge == 2
        assert parse("[Fe++]").atoms[0].charge == 2
        assert parse("[O-2]").atoms[0].charge == -2

    def test_hydrogen_counts(self):
        assert parse("[CH4]").atoms[0].explicit_h == 4
        assert parse("[CH]").atoms[0].explicit_h == 1
        assert parse("[C]").atoms[0].explicit_h == 0

    def test_aromatic_bracket(self):
        atom = parse("c1cc[nH]c1").atoms[3]
        assert atom.aromatic and atom.element == "N" and atom.explicit_h == 1

    def test_isotope_and_map_accepted(self):
        assert parse("[13CH4]").atoms[0].element == "C"
        assert parse("[CH3:2]").atoms[0].explicit_h == 3


class TestErrors:
    def test_unbalanced_close(self):
        with pytest.raises(UnbalancedParenthesis) as exc:
            parse("CC)C")
        assert exc.value.offset == 2

    def test_unbalanced_open(self):
        with pytest.raises(UnbalancedParenthesis) as exc:
            parse("CC(C")
        assert exc.value.offset == 2

    def test_unclosed_ring(self):
        with pytest.raises(UnclosedRingBond) as exc:
            parse("C1CC")
        assert exc.value.offset == 1

    def test_unknown_bare_element(self):
        with pytest.raises(UnknownElement) as exc:
            parse("CEC")
        assert exc.value.offset == 1

    def test_unknown_bracket_element(self):
        with pytest.raises(UnknownElement):
            parse("[Xx]")

    def test_malformed_bracket(self):
        with pytest.raises(MalformedBracketAtom) as exc:
            parse("C[C")
        assert exc.value.offset == 1
        with pytest.raises(MalformedBracketAtom):
            parse("[]")

    def test_syntax_oddities(self):
        with pytest.raises(SmilesSyntaxError):
            parse("")
        with pytest.raises(SmilesSyntaxError):
            parse("=C")
        with pytest.raises(SmilesSyntaxError):
            parse("C==C")
        with pytest.raises(SmilesSyntaxError):
            parse("C11")
        with pytest.raises(SmilesSyntaxError):
            parse("C=1CCCCC#1")  # ring bond symbols disagree
