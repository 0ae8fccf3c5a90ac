"""Unit tests for the RBF SVM and its SMO trainer."""

import numpy as np
import pytest

from featurelens.detectors.svm import rbf_kernel, svm_decision, svm_parameter_count, train_svm


def xor_data():
    """Four Gaussian clusters with XOR labels; not linearly separable."""
    rng = np.random.default_rng(5)
    centers = np.array([[-2.0, -2.0], [2.0, 2.0], [-2.0, 2.0], [2.0, -2.0]])
    X = np.vstack([c + 0.3 * rng.standard_normal((15, 2)) for c in centers])
    y = np.array([0] * 30 + [1] * 30)
    return X, y


class TestRbfKernel:
    """Tests for the Gaussian kernel."""

    def test_diagonal_is_one(self):
        """Test that K(x, x) = 1."""
        X = np.random.default_rng(0).normal(size=(5, 3))
        np.testing.assert_allclose(np.diag(rbf_kernel(X, X, 0.7)), 1.0)

    def test_value(self):
        """Test exp(−γ‖a−b‖²) on a known pair."""
        K = rbf_kernel(np.array([[0.0, 0.0]]), np.array([[1.0, 2.0]]), 0.5)
        assert K[0, 0] == pytest.approx(np.exp(-0.5 * 5.0))


class TestTrainSvm:
    """Tests for SMO training."""

    def test_separates_blobs(self, blobs_data):
        """Test perfect training accuracy on well-separated clusters."""
        X, y = blobs_data
        params = train_svm(X, y, C=1.0, seed=0)
        assert params.converged
        pred = (svm_decision(params, X) >= 0.0).astype(int)
        np.testing.assert_array_equal(pred, y)

    def test_default_gamma(self, blobs_data):
        """Test that gamma defaults to one over the dimension."""
        X, y = blobs_data
        assert train_svm(X, y, seed=0).gamma == pytest.approx(1.0 / 5)

    def test_solves_xor(self):
        """Test that the kernel handles a non-linear layout."""
        X, y = xor_data()
        params = train_svm(X, y, C=10.0, gamma=0.5, seed=1)
        pred = (svm_decision(params, X) >= 0.0).astype(int)
        assert np.mean(pred == y) == 1.0

    def test_kkt_conditions_at_convergence(self, blobs_data):
        """Test box, equality and margin conditions of the dual solution."""
        X, y = blobs_data
        C, tol = 1.0, 1e-3
        params = train_svm(X, y, C=C, tol=tol, max_passes=500, seed=2)
        assert params.converged

        alphas = np.asarray(params.alphas)
        assert np.all(alphas > 0.0) and np.all(alphas <= C)
        assert abs(sum(params.dual_coef)) < 1e-8

        ys = np.where(y == 1, 1.0, -1.0)
        margins = ys * svm_decision(params, X)
        sv = np.asarray(params.support_vectors)
        for x, a, coef in zip(sv, alphas, params.dual_coef):
            i = int(np.flatnonzero(np.all(X == x, axis=1))[0])
            if 1e-8 < a < C - 1e-8:
                assert abs(margins[i] - 1.0) <= tol + 1e-6
            assert np.sign(coef) == ys[i]
        # non-support vectors sit on or outside the margin
        on_sv = np.zeros(len(y), dtype=bool)
        for x in sv:
            on_sv |= np.all(X == x, axis=1)
        assert np.all(margins[~on_sv] >= 1.0 - tol - 1e-6)

    def test_deterministic(self, blobs_data):
        """Test that a fixed seed reproduces the same solution."""
        X, y = blobs_data
        a = train_svm(X, y, seed=3)
        b = train_svm(X, y, seed=3)
        assert a.model_dump() == b.model_dump()

    def test_pass_cap(self):
        """Test that training stops after max_passes full passes."""
        X, y = xor_data()
        params = train_svm(X, y, C=100.0, gamma=0.5, max_passes=1, seed=0)
        assert params.passes == 1

    def test_parameter_count(self, blobs_data):
        """Test n_sv·d + n_sv + 2 stored numbers."""
        X, y = blobs_data
        params = train_svm(X, y, seed=0)
        n_sv = len(params.support_vectors)
        assert n_sv > 0
        assert svm_parameter_count(params) == n_sv * 5 + n_sv + 2
