"""Valence checking and implicit-hydrogen assignment."""

import pytest

from smiled.chem import check_valence, implicit_hydrogens, is_valid, parse
from smiled.errors import ValenceViolation


def hydrogens(smiles):
    g = parse(smiles)
    return [implicit_hydrogens(g, i) for i in range(len(g.atoms))]


class TestPlainValence:
    def test_methane(self):
        assert hydrogens("C") == [4]

    def test_fluorine_double_bond_rejected(self):
        with pytest.raises(ValenceViolation) as exc:
            check_valence(parse("F=F"))
        assert exc.value.atom_index == 0

    def test_carbon_dioxide(self):
        assert is_valid(parse("O=C=O"))
        assert hydrogens("O=C=O") == [0, 0, 0]

    def test_pentavalent_carbon_rejected(self):
        assert not is_valid(parse("C(C)(C)(C)(C)C"))

    def test_multivalent_sulfur_and_phosphorus(self):
        assert hydrogens("S") == [2]
        assert hydrogens("O=S=O") == [0, 0, 0]      # sulfur promotes to 4
        assert hydrogens("O=P(O)(O)O")[1] == 0      # phosphorus at 5

    def test_bracket_atoms_taken_as_written(self):
        assert hydrogens("[CH2]") == [2]
        assert is_valid(parse("[C](C)(C)(C)C"))      # bracket: accepted as written


class TestAromaticValence:
    def test_benzene_one_hydrogen_each(self):
        assert hydrogens("c1ccccc1") == [1] * 6

    def test_pyridine_nitrogen_bare(self):
        hs = hydrogens("c1ccncc1")
        assert hs[3] == 0 and sum(hs) == 5

    def test_furan_oxygen(self):
        g = parse("c1ccoc1")
        o_idx = next(i for i, a in enumerate(g.atoms) if a.element == "O")
        assert implicit_hydrogens(g, o_idx) == 0
        assert is_valid(g)

    def test_thiophene_sulfur(self):
        assert is_valid(parse("c1ccsc1"))
        g = parse("c1ccsc1")
        s_idx = next(i for i, a in enumerate(g.atoms) if a.element == "S")
        assert implicit_hydrogens(g, s_idx) == 0

    def test_pyrrole_needs_bracket_h(self):
        g = parse("c1cc[nH]c1")
        n_idx = next(i for i, a in enumerate(g.atoms) if a.element == "N")
        assert implicit_hydrogens(g, n_idx) == 1
        assert is_valid(g)

    def test_naphthalene_bridgeheads(self):
        hs = hydrogens("c1ccc2ccccc2c1")
        assert sorted(hs) == [0, 0, 1, 1, 1, 1, 1, 1, 1, 1]

    def test_dangling_aromatic_rejected(self):
        assert not is_valid(parse("cc"))
