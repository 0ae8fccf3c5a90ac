"""Pytest configuration and shared fixtures."""

from pathlib import Path

import numpy as np
import pytest

from featurelens.config import Config
from featurelens.synth.benchmark import SynthSpec, make_benchmark


@pytest.fixture
def small_config() -> Config:
    """Config sized for fast tests: 32 px images and short training runs."""
    return Config(
        canonical_size=32,
        mmd_reference_size=50,
        jobs=1,
        svm_max_passes=50,
        mlp_hidden=[8, 4],
        mlp_learning_rate=1e-2,
        mlp_max_epochs=30,
        mlp_fixed_epochs=20,
        mlp_patience=5,
        gbt_trees=10,
        gbt_max_depth=3,
        permutation_repeats=2,
    )


@pytest.fixture
def config_file(tmp_path: Path, small_config: Config) -> Path:
    """The small config written to disk for CLI tests."""
    path = tmp_path / "config.json"
    small_config.save_to_file(path)
    return path


@pytest.fixture
def blobs_data():
    """Two well-separated Gaussian clouds in 5 dimensions, 30 rows each."""
    rng = np.random.default_rng(0)
    X = np.vstack(
        [
            rng.normal(-2.0, 0.5, size=(30, 5)),
            rng.normal(2.0, 0.5, size=(30, 5)),
        ]
    )
    y = np.array([0] * 30 + [1] * 30)
    return X, y


@pytest.fixture
def synth_bench(tmp_path: Path) -> Path:
    """A 20-image sign-noise benchmark of 32×32 images; returns its directory."""
    out = tmp_path / "bench"
    spec = SynthSpec(n=20, kind="mixed", attack="sign", epsilon=0.1, seed=3, size=32)
    make_benchmark(spec, out, jobs=1)
    return out
