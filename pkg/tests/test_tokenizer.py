"""Tokenizer pattern, vocabulary, and id framing."""

import pytest
from conftest import random_molecule

from smiled.chem import canonicalize
from smiled.errors import EmptyCorpus, TooLong, UnknownId, UnmatchedBracket
from smiled.nn import seeded_rng
from smiled.tokenizer import (
    BOS_ID,
    EOS_ID,
    PAD_ID,
    SPECIALS,
    UNK_ID,
    Vocabulary,
    build_vocab,
    decode,
    encode,
    tokenize,
)


class TestTokenize:
    @pytest.mark.parametrize(
        "smiles,expected",
        [
            ("CCl", ["C", "Cl"]),
            ("C[C@@H](N)O", ["C", "[C@@H]", "(", "N", ")", "O"]),
            ("C%10CC%10", ["C", "%10", "C", "C", "%10"]),
            ("CBr", ["C", "Br"]),
            ("c1ccccc1", ["c", "1", "c", "c", "c", "c", "c", "1"]),
            ("CC(=O)O", ["C", "C", "(", "=", "O", ")", "O"]),
            ("[13CH3+]C", ["[13CH3+]", "C"]),
            ("F/C=C\\F", ["F", "/", "C", "=", "C", "\\", "F"]),
            ("C.C", ["C", ".", "C"]),
        ],
    )
    def test_published_pattern(self, smiles, expected):
        assert list(tokenize(smiles).tokens) == expected

    def test_concatenation_invariant(self):
        rng = seeded_rng(8)
        for _ in range(50):
            smiles = canonicalize(random_molecule(rng))
            ts = tokenize(smiles)
            assert "".join(ts.tokens) == smiles == ts.source

    def test_unmatched_bracket(self):
        with pytest.raises(UnmatchedBracket) as exc:
            tokenize("C[CH3")
        assert exc.value.offset == 1


class TestVocabulary:
    def test_specials_occupy_first_five(self):
        vocab = build_vocab(["CCO"])
        assert len(vocab) == 7  # 5 specials + C + O
        for idx, token in enumerate(SPECIALS):
            assert vocab.id(token) == idx
            assert vocab.token(idx) == token

    def test_token_dedup(self):
        assert len(build_vocab(["C", "C", "C"])) == 6

    def test_first_seen_order(self):
        vocab = build_vocab(["OC", "N"])
        assert vocab.token(5) == "O" and vocab.token(6) == "C" and vocab.token(7) == "N"

    def test_bijective(self):
        vocab = build_vocab(["CC(=O)Oc1ccccc1C(=O)O", "C%12CC%12"])
        for idx in range(len(vocab)):
            assert vocab.id(vocab.token(idx)) == idx

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            build_vocab([])
        with pytest.raises(EmptyCorpus):
            build_vocab(["", "  "])

    def test_unknown_token_maps_to_unk(self):
        vocab = build_vocab(["CC"])
        assert vocab.id("N") == UNK_ID

    def test_tsv_roundtrip(self, tmp_path):
        vocab = build_vocab(["CC(=O)Oc1ccccc1"])
        path = tmp_path / "vocab.tsv"
        vocab.save(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "[PAD]\t0"
        loaded = Vocabulary.load(path)
        assert loaded.token_of == vocab.token_of

    def test_unknown_id_raises(self):
        vocab = build_vocab(["C"])
        with pytest.raises(UnknownId):
            vocab.token(99)


class TestEncodeDecode:
    def test_framing_and_padding(self):
        vocab = build_vocab(["C"])
        ids = encode(tokenize("C"), vocab, max_len=8)
        assert ids == [BOS_ID, vocab.id("C"), EOS_ID] + [PAD_ID] * 5

    def test_too_long(self):
        vocab = build_vocab(["C"])
        with pytest.raises(TooLong):
            encode(tokenize("C" * 201), vocab, max_len=202)
        encode(tokenize("C" * 200), vocab, max_len=202)  # exactly fits

    def test_roundtrip(self):
        corpus = ["CCO", "c1ccccc1", "C[C@@H](N)O"]
        vocab = build_vocab(corpus)
        for smiles in corpus:
            ids = encode(tokenize(smiles), vocab, max_len=32)
            assert decode(ids, vocab) == smiles

    def test_decode_unknown_id(self):
        vocab = build_vocab(["C"])
        with pytest.raises(UnknownId):
            decode([0, 3, 99], vocab)
