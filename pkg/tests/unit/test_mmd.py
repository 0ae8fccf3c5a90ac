"""Unit tests for the per-sample MMD score."""

import numpy as np
import pytest

from featurelens.core.errors import (
    DegenerateReference,
    DimensionMismatch,
    InsufficientReference,
)
from featurelens.features.mmd import MmdReference, build_reference, mmd_score, mmd_scores


def oracle(x: np.ndarray, ref: np.ndarray, h: float) -> float:
    """Direct double-sum evaluation of the discrepancy."""
    m = ref.shape[0]
    k = lambda a, b: np.exp(-np.sum((a - b) ** 2) / h**2)  # noqa: E731
    cross = sum(k(x, r) for r in ref) / m
    self_term = sum(k(a, b) for a in ref for b in ref) / m**2
    return float(np.sqrt(max(0.0, 1.0 - 2.0 * cross + self_term)))


class TestBuildReference:
    """Tests for reference construction."""

    def test_subsample_size_and_bandwidth(self):
        """Test that m rows are kept and the bandwidth is the median distance."""
        clean = np.random.default_rng(0).normal(size=(40, 4))
        ref = build_reference(clean, 10, seed=1)
        assert ref.size == 10
        assert ref.dim == 4
        rows = ref.array()
        dists = [np.linalg.norm(rows[i] - rows[j]) for i in range(10) for j in range(i + 1, 10)]
        assert ref.bandwidth == pytest.approx(np.median(dists))

    def test_rows_come_from_input(self):
        """Test that reference rows are a subset of the clean rows."""
        clean = np.random.default_rng(2).normal(size=(20, 3))
        ref = build_reference(clean, 5, seed=3)
        for row in ref.array():
            assert np.any(np.all(clean == row, axis=1))

    def test_seeded(self):
        """Test that the same seed picks the same rows."""
        clean = np.random.default_rng(4).normal(size=(30, 3))
        assert build_reference(clean, 8, 5).vectors == build_reference(clean, 8, 5).vectors

    def test_too_few_rows(self):
        """Test that one clean row raises InsufficientReference."""
        with pytest.raises(InsufficientReference):
            build_reference(np.zeros((1, 3)), 1, seed=0)

    def test_m_larger_than_n(self):
        """Test that asking for more rows than available is rejected."""
        with pytest.raises(ValueError):
            build_reference(np.zeros((3, 2)) + np.arange(3)[:, None], 5, seed=0)

    def test_degenerate_reference_warns(self):
        """Test that coincident rows fall back to bandwidth 1 with a warning."""
        with pytest.warns(DegenerateReference):
            ref = build_reference(np.ones((6, 3)), 4, seed=0)
        assert ref.bandwidth == 1.0
        assert ref.self_term == pytest.approx(1.0)
        assert ref.notes

    def test_json_round_trip(self):
        """Test that the reference survives pydantic serialization."""
        ref = build_reference(np.random.default_rng(6).normal(size=(12, 3)), 6, seed=0)
        again = MmdReference.model_validate_json(ref.model_dump_json())
        assert again.vectors == ref.vectors
        assert again.bandwidth == ref.bandwidth


class TestMmdScore:
    """Tests for scoring single samples."""

    def test_matches_double_sum(self):
        """Test agreement with the direct formula."""
        rng = np.random.default_rng(7)
        ref = build_reference(rng.normal(size=(25, 5)), 12, seed=8)
        for _ in range(5):
            x = rng.normal(size=5)
            expected = oracle(x, ref.array(), ref.bandwidth)
            assert mmd_score(x, ref) == pytest.approx(expected, abs=1e-10)

    def test_far_point_scores_higher(self):
        """Test that a distant sample has a larger discrepancy than a central one."""
        rng = np.random.default_rng(9)
        ref = build_reference(rng.normal(size=(50, 3)), 30, seed=0)
        near = mmd_score(np.zeros(3), ref)
        far = mmd_score(np.full(3, 10.0), ref)
        assert far > near >= 0.0

    def test_far_point_limit(self):
        """Test that a sample far from everything approaches √(1 + self_term)."""
        ref = build_reference(np.random.default_rng(10).normal(size=(20, 2)), 10, seed=0)
        far = mmd_score(np.full(2, 1e6), ref)
        assert far == pytest.approx(np.sqrt(1.0 + ref.self_term))

    def test_vectorized_matches_single(self):
        """Test that mmd_scores agrees with mmd_score row by row."""
        rng = np.random.default_rng(11)
        ref = build_reference(rng.normal(size=(20, 4)), 10, seed=0)
        X = rng.normal(size=(6, 4))
        np.testing.assert_allclose(mmd_scores(X, ref), [mmd_score(x, ref) for x in X])

    def test_dimension_mismatch(self):
        """Test that a wrong-length sample raises DimensionMismatch."""
        ref = build_reference(np.random.default_rng(12).normal(size=(10, 4)), 5, seed=0)
        with pytest.raises(DimensionMismatch):
            mmd_score(np.zeros(3), ref)


class TestMmdProperties:
    """Closed forms and bounds of the discrepancy."""

    def test_equilateral_reference(self):
        """Test bandwidth d, self term (3 + 6/e)/9 and the score at a vertex."""
        d = 2.5
        rows = np.array([[0.0, 0.0], [d, 0.0], [d / 2.0, d * np.sqrt(3.0) / 2.0]])
        ref = build_reference(rows, 3, seed=0)
        assert ref.bandwidth == pytest.approx(d, rel=1e-12)
        assert ref.self_term == pytest.approx((3.0 + 6.0 * np.exp(-1.0)) / 9.0, rel=1e-12)
        expected = np.sqrt((2.0 - 2.0 * np.exp(-1.0)) / 3.0)
        assert mmd_score(rows[1], ref) == pytest.approx(expected, rel=1e-12)

    def test_reference_order_does_not_matter(self):
        """Test that permuting the reference rows leaves every score unchanged."""
        rng = np.random.default_rng(13)
        ref = build_reference(rng.normal(size=(30, 4)), 15, seed=2)
        shuffled = MmdReference(
            vectors=[ref.vectors[i] for i in rng.permutation(ref.size)],
            bandwidth=ref.bandwidth,
            self_term=ref.self_term,
        )
        X = rng.normal(size=(8, 4))
        np.testing.assert_allclose(mmd_scores(X, shuffled), mmd_scores(X, ref), rtol=1e-12)

    def test_bounded_by_root_two(self):
        """Test that no sample, near or far, scores above √2."""
        rng = np.random.default_rng(14)
        ref = build_reference(rng.normal(size=(20, 3)), 10, seed=0)
        X = np.vstack([rng.normal(size=(50, 3)), rng.normal(scale=100.0, size=(50, 3))])
        scores = mmd_scores(X, ref)
        assert np.all(scores >= 0.0)
        assert np.all(scores <= np.sqrt(2.0))

    def test_grows_along_a_ray(self):
        """Test that moving away from a symmetric reference strictly raises the score."""
        ref = build_reference(np.array([[1.0, 0.0], [-1.0, 0.0]]), 2, seed=0)
        t = np.linspace(0.0, 5.0, 21)
        scores = mmd_scores(np.column_stack([np.zeros_like(t), t]), ref)
        assert np.all(np.diff(scores) > 0.0)
