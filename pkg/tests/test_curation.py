"""Curation pipeline: dedup, conservation, determinism, length analysis."""

import io

import pytest
from conftest import random_molecule

from smiled.chem import canonicalize
from smiled.curation import curate, length_cutoff_analysis
from smiled.errors import EmptyCorpus
from smiled.nn import seeded_rng
from smiled.tokenizer import tokenize


def run_curate(lines):
    out = io.StringIO()
    report = curate(lines, out)
    return report, out.getvalue().splitlines()


class TestCurate:
    def test_duplicate_removal(self):
        report, lines = run_curate(["CCO", "OCC", "C"])
        assert len(lines) == 2
        assert report.duplicates_removed == 1
        assert report.output_count == 2

    def test_invalid_line_counted(self):
        report, lines = run_curate(["C1CC"])
        assert lines == []
        assert report.parse_failures == 1

    def test_valence_failure_counted(self):
        report, lines = run_curate(["F=F", "C"])
        assert report.valence_failures == 1 and report.output_count == 1

    def test_first_seen_order(self):
        _, lines = run_curate(["CCN", "CCO", "NCC"])
        assert lines[0] == canonicalize_str("CCN")
        assert lines[1] == canonicalize_str("CCO")

    def test_multi_component_sorted(self):
        _, lines = run_curate(["CCO.C"])
        assert lines == ["C.CCO"]
        report, lines2 = run_curate(["C.OCC"])
        assert lines2 == lines and report.duplicates_removed == 0

    def test_conservation_on_random_corpora(self):
        rng = seeded_rng(17)
        for _ in range(20):
            lines = []
            for _ in range(int(rng.integers(5, 40))):
                roll = rng.random()
                if roll < 0.15:
                    lines.append("C1CC(")          # parse failure
                elif roll < 0.25:
                    lines.append("F=F")            # valence failure
                elif roll < 0.5 and lines:
                    lines.append(lines[int(rng.integers(len(lines)))])
                else:
                    lines.append(canonicalize(random_molecule(rng)))
            report, out_lines = run_curate(lines)
            assert report.conserved()
            assert report.input_count == len(lines)
            assert len(out_lines) == report.output_count
            assert len(set(out_lines)) == len(out_lines)

    def test_histogram_totals_match_output(self):
        report, lines = run_curate(["CCO", "c1ccccc1", "CC"])
        assert sum(report.token_length_histogram.values()) == len(lines)
        assert report.token_length_histogram[len(tokenize(lines[0]).tokens)] >= 1

    def test_deterministic(self):
        lines = ["CCO", "OCC", "CCN", "c1ccccc1", "C" * 5]
        first = run_curate(lines)
        second = run_curate(lines)
        assert first[1] == second[1]
        assert first[0].to_json() == second[0].to_json()


def canonicalize_str(smiles):
    from smiled.chem import parse

    return canonicalize(parse(smiles))


class TestLengthCutoff:
    def test_all_short(self):
        assert length_cutoff_analysis(["C", "N", "O"], 202) == 1.0

    def test_framed_lengths(self):
        # "C" frames to 3 tokens, "CC" to 4; neither is under 2.
        assert length_cutoff_analysis(["C", "CC"], 2) == 0.0
        assert length_cutoff_analysis(["C", "CC"], 4) == 0.5

    def test_against_recount_oracle(self):
        rng = seeded_rng(23)
        corpus = [canonicalize(random_molecule(rng)) for _ in range(60)]
        for cap in (4, 8, 16):
            expected = sum(
                1 for s in corpus if len(tokenize(s).tokens) + 2 < cap
            ) / len(corpus)
            assert length_cutoff_analysis(corpus, cap) == pytest.approx(expected)

    def test_empty(self):
        with pytest.raises(EmptyCorpus):
            length_cutoff_analysis([], 10)
