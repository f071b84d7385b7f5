"""Path fingerprints, Tanimoto, and scaffold extraction."""

import pytest
from conftest import random_molecule

from smiled.chem import (
    Fingerprint,
    canonicalize,
    fingerprint,
    isomorphic,
    parse,
    scaffold,
    tanimoto,
)
from smiled.errors import WidthMismatch
from smiled.nn import seeded_rng


class TestFingerprint:
    def test_numbering_invariance(self):
        rng = seeded_rng(5)
        for _ in range(20):
            g = random_molecule(rng)
            perm = list(rng.permutation(len(g.atoms)))
            assert fingerprint(g).bits == fingerprint(g.permuted(perm)).bits

    def test_disjoint_single_atoms(self):
        fp_c = fingerprint(parse("C"))
        fp_o = fingerprint(parse("O"))
        assert fp_c.bits.isdisjoint(fp_o.bits)
        assert tanimoto(fp_c, fp_o) == 0.0

    def test_identical_molecules_score_one(self):
        assert tanimoto(fingerprint(parse("CCO")), fingerprint(parse("OCC"))) == 1.0

    def test_default_width(self):
        fp = fingerprint(parse("CCO"))
        assert fp.width == 2048
        assert all(0 <= b < 2048 for b in fp.bits)


class TestTanimoto:
    def test_set_arithmetic(self):
        a = Fingerprint(width=16, bits=frozenset({1, 2}))
        b = Fingerprint(width=16, bits=frozenset({2, 3}))
        assert tanimoto(a, b) == pytest.approx(1.0 / 3.0)

    def test_both_empty_is_one(self):
        empty = Fingerprint(width=16, bits=frozenset())
        assert tanimoto(empty, empty) == 1.0

    def test_width_mismatch(self):
        a = Fingerprint(width=16, bits=frozenset({1}))
        b = Fingerprint(width=32, bits=frozenset({1}))
        with pytest.raises(WidthMismatch):
            tanimoto(a, b)

    def test_symmetry_reflexivity_bounds(self):
        rng = seeded_rng(6)
        for _ in range(20):
            fa = fingerprint(random_molecule(rng))
            fb = fingerprint(random_molecule(rng))
            assert tanimoto(fa, fb) == tanimoto(fb, fa)
            assert 0.0 <= tanimoto(fa, fb) <= 1.0
            assert tanimoto(fa, fa) == 1.0


class TestScaffold:
    def test_acyclic_is_empty(self):
        assert len(scaffold(parse("CCCC")).atoms) == 0
        assert len(scaffold(parse("C")).atoms) == 0

    def test_ethylbenzene_keeps_ring(self):
        s = scaffold(parse("CCc1ccccc1"))
        assert canonicalize(s) == canonicalize(parse("c1ccccc1"))

    def test_ring_is_fixed_point(self):
        g = parse("c1ccccc1")
        assert isomorphic(scaffold(g), g)

    def test_scaffold_idempotent(self):
        rng = seeded_rng(7)
        for _ in range(30):
            g = random_molecule(rng)
            once = scaffold(g)
            twice = scaffold(once)
            assert canonicalize(once) == canonicalize(twice)

    def test_linker_between_rings_survives(self):
        s = scaffold(parse("c1ccccc1CCc1ccccc1"))
        assert len(s.atoms) == 14  # two rings plus the two-carbon bridge
