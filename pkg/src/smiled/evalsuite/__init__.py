"""Latent-space compositionality study and generation metrics."""

from .families import FAMILY_TAGS, FamilyTriple, family_member, generate_families
from .fewshot import (
    FewshotResult,
    fewshot_arithmetic,
    fewshot_sweep,
    tanimoto_to_expected,
)
from .genmetrics import generation_metrics
from .harness import dump_embeddings, latent_space_study
from .probe import LinearProbe, fit_probe, sample_fit_triples

__all__ = [
    "FAMILY_TAGS",
    "FamilyTriple",
    "family_member",
    "generate_families",
    "LinearProbe",
    "fit_probe",
    "sample_fit_triples",
    "FewshotResult",
    "fewshot_arithmetic",
    "fewshot_sweep",
    "tanimoto_to_expected",
    "generation_metrics",
    "latent_space_study",
    "dump_embeddings",
]
