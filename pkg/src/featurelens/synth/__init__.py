"""Synthetic clean images, surrogate attacks and benchmark generation."""

from featurelens.synth.attacks import ATTACKS, perturb
from featurelens.synth.benchmark import ManifestRow, SynthSpec, make_benchmark, read_manifest
from featurelens.synth.generators import CLEAN_KINDS, gen_clean

__all__ = [
    "ATTACKS",
    "CLEAN_KINDS",
    "ManifestRow",
    "SynthSpec",
    "gen_clean",
    "make_benchmark",
    "perturb",
    "read_manifest",
]
