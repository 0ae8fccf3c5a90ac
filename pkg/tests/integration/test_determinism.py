"""Integration tests: identical seeds give identical artifacts."""

import numpy as np
import pytest

from featurelens.analysis.protocols import fit_detector, load_benchmark
from featurelens.detectors.persistence import dumps_model
from featurelens.features.pipeline import extract_matrix
from featurelens.synth.benchmark import SynthSpec, make_benchmark, read_manifest, resolve_paths


def file_bytes(root):
    return {p.relative_to(root): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


class TestDeterminism:
    """Repeated runs with the same seed."""

    def test_benchmark_files_identical(self, tmp_path):
        """Test that two generations write byte-identical trees, whatever the thread count."""
        spec = SynthSpec(n=12, kind="mixed", attack="iterative", epsilon=0.05, seed=8, size=16)
        make_benchmark(spec, tmp_path / "a", jobs=1)
        make_benchmark(spec, tmp_path / "b", jobs=3)
        assert file_bytes(tmp_path / "a") == file_bytes(tmp_path / "b")

    def test_different_seed_differs(self, tmp_path):
        """Test that another root seed changes the images."""
        make_benchmark(SynthSpec(n=4, seed=1, size=16), tmp_path / "a", jobs=1)
        make_benchmark(SynthSpec(n=4, seed=2, size=16), tmp_path / "b", jobs=1)
        assert file_bytes(tmp_path / "a") != file_bytes(tmp_path / "b")

    def test_extraction_independent_of_jobs(self, synth_bench, small_config):
        """Test that row order and values do not depend on the worker count."""
        manifest = synth_bench / "manifest.csv"
        paths = resolve_paths(read_manifest(manifest), manifest)
        serial = extract_matrix(paths, small_config, jobs=1)
        parallel = extract_matrix(paths, small_config, jobs=4)
        np.testing.assert_array_equal(serial, parallel)

    @pytest.mark.parametrize("kind", ["svm", "mlp", "gbt"])
    def test_models_identical(self, kind, synth_bench, small_config):
        """Test that retraining with the same seed serializes to the same text."""
        bench = load_benchmark(synth_bench / "manifest.csv", config=small_config)
        a = fit_detector(bench, kind, seed=3, config=small_config)
        b = fit_detector(bench, kind, seed=3, config=small_config)
        assert dumps_model(a.model) == dumps_model(b.model)
