"""Corpus curation: canonicalize, validate, deduplicate, report.

Deduplication keys on a 64-bit hash of the canonical string, with the
colliding strings stored for verification, so memory stays bounded by the
number of unique molecules while equality remains exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Iterable

from .chem import canonicalize, check_valence, parse
from .chem.fingerprint import fnv1a64
from .errors import EmptyCorpus, SmilesError, ValenceViolation
from .tokenizer import tokenize


@dataclass
class CurationReport:
    input_count: int = 0
    parse_failures: int = 0
    valence_failures: int = 0
    duplicates_removed: int = 0
    output_count: int = 0
    token_length_histogram: dict[int, int] = field(default_factory=dict)

    def conserved(self) -> bool:
        return self.input_count == (
            self.output_count
            + self.parse_failures
            + self.valence_failures
            + self.duplicates_removed
        )

    def to_json(self) -> str:
        payload = {
            "input_count": self.input_count,
            "parse_failures": self.parse_failures,
            "valence_failures": self.valence_failures,
            "duplicates_removed": self.duplicates_removed,
            "output_count": self.output_count,
            "token_length_histogram": {
                str(k): v for k, v in sorted(self.token_length_histogram.items())
            },
        }
        return json.dumps(payload, indent=2)

    def to_text(self) -> str:
        lines = [
            f"input_count={self.input_count}",
            f"parse_failures={self.parse_failures}",
            f"valence_failures={self.valence_failures}",
            f"duplicates_removed={self.duplicates_removed}",
            f"output_count={self.output_count}",
        ]
        return "\n".join(lines)


def canonical_line(smiles: str) -> str:
    """Parse + validate + canonicalize one SMILES line.  Multi-component
    inputs are canonicalized per component and joined sorted."""
    graph = parse(smiles)
    check_valence(graph)
    return canonicalize(graph)


def curate(corpus_in: Iterable[str], corpus_out: IO[str]) -> CurationReport:
    """Write one canonical SMILES per valid unique molecule, first-seen
    order, and account for every input line in the report."""
    report = CurationReport()
    seen: dict[int, list[str]] = {}
    for raw in corpus_in:
        line = raw.strip()
        if not line:
            continue
        report.input_count += 1
        try:
            canonical = canonical_line(line)
        except SmilesError:
            report.parse_failures += 1
            continue
        except ValenceViolation:
            report.valence_failures += 1
            continue
        key = fnv1a64(canonical.encode())
        bucket = seen.setdefault(key, [])
        if canonical in bucket:
            report.duplicates_removed += 1
            continue
        bucket.append(canonical)
        corpus_out.write(canonical + "\n")
        report.output_count += 1
        length = len(tokenize(canonical).tokens)
        report.token_length_histogram[length] = (
            report.token_length_histogram.get(length, 0) + 1
        )
    return report


def length_cutoff_analysis(corpus: Iterable[str], max_len: int) -> float:
    """Fraction of molecules whose framed token length (tokens + BOS/EOS)
    is strictly below ``max_len``."""
    total = 0
    under = 0
    for raw in corpus:
        line = raw.strip()
        if not line:
            continue
        total += 1
        if len(tokenize(line).tokens) + 2 < max_len:
            under += 1
    if total == 0:
        raise EmptyCorpus("no SMILES in corpus")
    return under / total
