"""Regex-level SMILES tokenization, vocabulary construction, and id
encoding/decoding.

The token pattern keeps bracket atoms, the two-letter halogens, and
``%NN`` ring closures as single tokens; everything else is one character
per token, so joining the tokens always reproduces the input string.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .errors import EmptyCorpus, TooLong, UnknownId, UnmatchedBracket

PAD, UNK, MASK, BOS, EOS = "[PAD]", "[UNK]", "[MASK]", "[BOS]", "[EOS]"
SPECIALS = (PAD, UNK, MASK, BOS, EOS)
PAD_ID, UNK_ID, MASK_ID, BOS_ID, EOS_ID = range(5)

DEFAULT_MAX_LEN = 202

_TOKEN_RE = re.compile(
    r"(\[[^\]]+\]|Br|Cl|%[0-9]{2}|.)",
    re.DOTALL,
)


@dataclass(frozen=True)
class TokenSequence:
    tokens: tuple[str, ...]
    source: str


def tokenize(smiles: str) -> TokenSequence:
    """Split a SMILES string into tokens; ``''.join(tokens) == smiles``.

    Raises UnmatchedBracket when a ``[`` never closes.
    """
    tokens = []
    pos = 0
    for match in _TOKEN_RE.finditer(smiles):
        token = match.group(0)
        if token == "[":
            raise UnmatchedBracket("'[' without closing ']'", match.start())
        tokens.append(token)
        pos = match.end()
    assert pos == len(smiles) and "".join(tokens) == smiles
    return TokenSequence(tokens=tuple(tokens), source=smiles)


class Vocabulary:
    """Bijective token <-> id map; the five special tokens hold ids 0-4."""

    def __init__(self, tokens: Iterable[str]):
        self.id_of: dict[str, int] = {}
        self.token_of: list[str] = []
        for token in (*SPECIALS, *tokens):
            if token not in self.id_of:
                self.id_of[token] = len(self.token_of)
                self.token_of.append(token)

    def __len__(self) -> int:
        return len(self.token_of)

    def __contains__(self, token: str) -> bool:
        return token in self.id_of

    def id(self, token: str) -> int:
        return self.id_of.get(token, UNK_ID)

    def token(self, idx: int) -> str:
        if not 0 <= idx < len(self.token_of):
            raise UnknownId(f"id {idx} not in vocabulary of size {len(self)}")
        return self.token_of[idx]

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for idx, token in enumerate(self.token_of):
                fh.write(f"{token}\t{idx}\n")

    @classmethod
    def load(cls, path) -> "Vocabulary":
        tokens = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                token, _, idx = line.rstrip("\n").partition("\t")
                tokens.append((int(idx), token))
        tokens.sort()
        vocab = cls(token for _, token in tokens)
        return vocab


def build_vocab(corpus: Iterable[str]) -> Vocabulary:
    """Specials plus unique corpus tokens in first-seen order."""
    seen: dict[str, None] = {}
    count = 0
    for line in corpus:
        line = line.strip()
        if not line:
            continue
        count += 1
        for token in tokenize(line).tokens:
            seen.setdefault(token, None)
    if count == 0:
        raise EmptyCorpus("no SMILES in corpus")
    return Vocabulary(seen)


def encode(ts: TokenSequence, vocab: Vocabulary, max_len: int = DEFAULT_MAX_LEN) -> list[int]:
    """[BOS] tokens [EOS], padded with [PAD] to ``max_len``.  Unknown
    tokens map to [UNK].  Raises TooLong when the framed sequence does
    not fit."""
    if len(ts.tokens) + 2 > max_len:
        raise TooLong(
            f"{len(ts.tokens)} tokens + framing exceed max length {max_len}"
        )
    ids = [BOS_ID]
    ids.extend(vocab.id(t) for t in ts.tokens)
    ids.append(EOS_ID)
    ids.extend([PAD_ID] * (max_len - len(ids)))
    return ids


def decode(ids: Iterable[int], vocab: Vocabulary) -> str:
    """Drop special tokens and concatenate the rest."""
    parts = []
    for idx in ids:
        token = vocab.token(idx)
        if token not in SPECIALS:
            parts.append(token)
    return "".join(parts)
