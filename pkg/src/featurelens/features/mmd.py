"""Per-sample maximum mean discrepancy against a clean reference set."""

from __future__ import annotations

import warnings
from typing import Any, List

import numpy as np
from pydantic import BaseModel, Field, PrivateAttr
from scipy.spatial.distance import cdist, pdist

from featurelens.core.errors import (
    DegenerateReference,
    DimensionMismatch,
    InsufficientReference,
)


class MmdReference(BaseModel):
    """Standardized clean feature rows plus Gaussian-kernel bandwidth."""

    vectors: List[List[float]] = Field(description="m reference rows (standardized space)")
    bandwidth: float = Field(gt=0.0, description="Median pairwise Euclidean distance")
    self_term: float = Field(gt=0.0, le=1.0, description="(1/m²) ΣΣ k(r_i, r_j)")
    notes: List[str] = Field(default_factory=list)

    _array: Any = PrivateAttr(default=None)

    def array(self) -> np.ndarray:
        if self._array is None:
            arr = np.asarray(self.vectors, dtype=np.float64)
            arr.setflags(write=False)
            self._array = arr
        return self._array

    @property
    def size(self) -> int:
        return len(self.vectors)

    @property
    def dim(self) -> int:
        return len(self.vectors[0]) if self.vectors else 0

    def __repr__(self) -> str:
        return f"MmdReference(m={self.size}, dim={self.dim}, h={self.bandwidth:.4g})"


def gaussian_kernel(sq_dist: np.ndarray, bandwidth: float) -> np.ndarray:
    """k(a, b) = exp(−‖a−b‖² / h²)."""
    return np.exp(-sq_dist / (bandwidth * bandwidth))


def build_reference(clean_features: np.ndarray, m: int, seed: int) -> MmdReference:
    """
    Subsample ``m`` clean rows and precompute bandwidth and self term.

    Args:
        clean_features: N×d standardized clean rows
        m: Reference size, 2 ≤ m ≤ N
        seed: Seed for the subsampling generator

    Raises:
        InsufficientReference: N < 2
    """
    clean = np.asarray(clean_features, dtype=np.float64)
    if clean.ndim != 2 or clean.shape[0] < 2:
        raise InsufficientReference(
            f"MMD reference needs at least 2 clean rows, got {clean.shape[0] if clean.ndim == 2 else 0}"
        )
    n = clean.shape[0]
    if not 2 <= m <= n:
        raise ValueError(f"reference size must satisfy 2 <= m <= {n}, got {m}")

    rng = np.random.default_rng(seed)
    rows = clean[rng.choice(n, size=m, replace=False)]

    notes: List[str] = []
    bandwidth = float(np.median(pdist(rows, metric="euclidean")))
    if bandwidth <= 0.0:
        message = "reference points coincide; bandwidth set to 1"
        warnings.warn(message, DegenerateReference, stacklevel=2)
        notes.append(f"DegenerateReference: {message}")
        bandwidth = 1.0

    gram = gaussian_kernel(cdist(rows, rows, metric="sqeuclidean"), bandwidth)
    self_term = float(gram.mean())

    return MmdReference(
        vectors=rows.tolist(), bandwidth=bandwidth, self_term=self_term, notes=notes
    )


def mmd_scores(X: np.ndarray, ref: MmdReference) -> np.ndarray:
    """Vectorized ``mmd_score`` over the rows of X."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != ref.dim:
        raise DimensionMismatch(f"sample has {X.shape[1]} dims, reference has {ref.dim}")
    cross = gaussian_kernel(cdist(X, ref.array(), metric="sqeuclidean"), ref.bandwidth)
    sq = 1.0 - 2.0 * cross.mean(axis=1) + ref.self_term
    return np.sqrt(np.maximum(sq, 0.0))


def mmd_score(x: np.ndarray, ref: MmdReference) -> float:
    """
    Discrepancy between the point mass at x and the reference set.

    √max(0, k(x,x) − (2/m) Σ k(x, r_i) + self_term), with k(x,x) = 1.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatch(f"expected a 1-D vector, got shape {x.shape}")
    return float(mmd_scores(x[None, :], ref)[0])
