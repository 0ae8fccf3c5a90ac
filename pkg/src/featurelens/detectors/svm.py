"""Gaussian-kernel SVM trained with sequential minimal optimization."""

from __future__ import annotations

from typing import List, Optional, Union

import numpy as np
from pydantic import BaseModel, Field
from scipy.spatial.distance import cdist

from featurelens.core.verbosity import VerbosityLevel, emit

ALPHA_STEP_EPS = 1e-8
BOUND_EPS = 1e-12


class SvmParams(BaseModel):
    """Support vectors and dual solution of a binary RBF SVM."""

    support_vectors: List[List[float]]
    dual_coef: List[float] = Field(description="alpha_i * y_i, y in {-1, +1}")
    alphas: List[float]
    bias: float
    gamma: float = Field(gt=0.0)
    C: float = Field(gt=0.0)
    passes: int = 0
    converged: bool = False


def rbf_kernel(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    """K(a, b) = exp(−γ ‖a − b‖²)."""
    return np.exp(-gamma * cdist(A, B, metric="sqeuclidean"))


class _Smo:
    """SMO state over a precomputed Gram matrix."""

    def __init__(self, K: np.ndarray, y: np.ndarray, C: float, tol: float, rng: np.random.Generator):
        self.K = K
        self.y = y
        self.C = C
        self.tol = tol
        self.rng = rng
        self.n = y.size
        self.alpha = np.zeros(self.n)
        self.b = 0.0
        self.f = np.zeros(self.n)  # Σ_j alpha_j y_j K(x_j, x_i), bias excluded

    def error(self, i: int) -> float:
        return self.f[i] + self.b - self.y[i]

    def violates(self, i: int) -> bool:
        r = self.y[i] * self.error(i)
        below = r < -self.tol and self.alpha[i] < self.C
        above = r > self.tol and self.alpha[i] > 0.0
        return bool(below or above)

    def snap(self, a: float) -> float:
        """Round multipliers within roundoff of a bound onto it."""
        if a < BOUND_EPS * self.C:
            return 0.0
        if a > self.C * (1.0 - BOUND_EPS):
            return self.C
        return a

    def step(self, i: int, j: int) -> bool:
        """Jointly optimize alpha_i, alpha_j; returns True if they moved."""
        if i == j:
            return False
        K, y, C = self.K, self.y, self.C
        Ei, Ej = self.error(i), self.error(j)
        ai_old, aj_old = self.alpha[i], self.alpha[j]

        if y[i] != y[j]:
            L, H = max(0.0, aj_old - ai_old), min(C, C + aj_old - ai_old)
        else:
            L, H = max(0.0, ai_old + aj_old - C), min(C, ai_old + aj_old)
        if L >= H:
            return False

        eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
        if eta >= 0.0:
            return False

        aj = float(np.clip(aj_old - y[j] * (Ei - Ej) / eta, L, H))
        if abs(aj - aj_old) < ALPHA_STEP_EPS:
            return False
        ai = ai_old + y[i] * y[j] * (aj_old - aj)
        ai = min(max(ai, 0.0), C)
        ai, aj = self.snap(ai), self.snap(aj)

        dai, daj = ai - ai_old, aj - aj_old
        b1 = self.b - Ei - y[i] * dai * K[i, i] - y[j] * daj * K[i, j]
        b2 = self.b - Ej - y[i] * dai * K[i, j] - y[j] * daj * K[j, j]
        if 0.0 < ai < C:
            b_new = b1
        elif 0.0 < aj < C:
            b_new = b2
        else:
            b_new = 0.5 * (b1 + b2)

        self.alpha[i], self.alpha[j] = ai, aj
        self.f += y[i] * dai * K[:, i] + y[j] * daj * K[:, j]
        self.b = b_new
        return True

    def best_partner(self, i: int, candidates: np.ndarray) -> int:
        """Candidate with the largest |E_i − E_j|."""
        errors = self.f[candidates] + self.b - self.y[candidates]
        return int(candidates[np.argmax(np.abs(self.error(i) - errors))])

    def non_bound(self) -> np.ndarray:
        return np.flatnonzero((self.alpha > 0.0) & (self.alpha < self.C))

    def examine(self, i: int) -> bool:
        """
        Try to improve a KKT violator ``i``.

        Partners are tried in order: the largest error gap among non-bound
        samples, then every non-bound sample, then every sample, each sweep
        starting at a seeded random offset.
        """
        if not self.violates(i):
            return False
        nb = self.non_bound()
        if nb.size > 1 and self.step(i, self.best_partner(i, nb)):
            return True
        for pool in (nb, np.arange(self.n)):
            if pool.size == 0:
                continue
            start = int(self.rng.integers(pool.size))
            for j in np.roll(pool, -start):
                if self.step(i, int(j)):
                    return True
        return False


def train_svm(
    X: np.ndarray,
    y: np.ndarray,
    C: float = 1.0,
    gamma: Optional[float] = None,
    tol: float = 1e-3,
    max_passes: int = 200,
    seed: int = 0,
    verbose: Union[bool, int] = False,
) -> SvmParams:
    """
    Fit the dual RBF SVM by sequential minimal optimization.

    Full passes over every sample alternate with sweeps over the non-bound
    samples until those stop changing. Training has converged once a full
    pass changes nothing; otherwise it stops after ``max_passes`` full passes.

    Args:
        X: N×d standardized features
        y: labels in {0, 1}
        gamma: kernel width, defaults to 1/d
    """
    X = np.asarray(X, dtype=np.float64)
    ys = np.where(np.asarray(y) == 1, 1.0, -1.0)
    gamma = float(gamma) if gamma is not None else 1.0 / X.shape[1]

    smo = _Smo(rbf_kernel(X, X, gamma), ys, C, tol, np.random.default_rng(seed))
    converged = False
    passes = 0
    examine_all = True
    sweeps_since_full = 0
    while passes < max_passes:
        candidates = np.arange(smo.n) if examine_all else smo.non_bound()
        changed = sum(smo.examine(int(i)) for i in candidates)
        if examine_all:
            passes += 1
            sweeps_since_full = 0
            emit(verbose, VerbosityLevel.DEBUG, f"   smo pass {passes}: {changed} updates")
            if changed == 0:
                converged = True
                break
            examine_all = False
        else:
            sweeps_since_full += 1
            if changed == 0 or sweeps_since_full >= max_passes:
                examine_all = True

    emit(
        verbose,
        VerbosityLevel.DETAIL,
        f"   svm: {passes} passes, converged={converged}, "
        f"{int(np.count_nonzero(smo.alpha))} support vectors",
    )

    support = np.flatnonzero(smo.alpha > 0.0)
    return SvmParams(
        support_vectors=X[support].tolist(),
        dual_coef=(smo.alpha[support] * ys[support]).tolist(),
        alphas=smo.alpha[support].tolist(),
        bias=float(smo.b),
        gamma=gamma,
        C=C,
        passes=passes,
        converged=converged,
    )


def svm_decision(params: SvmParams, X: np.ndarray) -> np.ndarray:
    """Decision values Σ α_i y_i K(sv_i, x) + b."""
    X = np.asarray(X, dtype=np.float64)
    if not params.support_vectors:
        return np.full(X.shape[0], params.bias)
    K = rbf_kernel(X, np.asarray(params.support_vectors), params.gamma)
    return K @ np.asarray(params.dual_coef) + params.bias


def svm_parameter_count(params: SvmParams) -> int:
    n_sv = len(params.support_vectors)
    d = len(params.support_vectors[0]) if n_sv else 0
    return n_sv * d + n_sv + 2

