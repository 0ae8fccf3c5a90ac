"""Feature-space displacement under perturbation and the explicit pairwise separator."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from featurelens.core.errors import DimensionMismatch, TooFewSamples, ZeroDisplacement
from featurelens.core.feature_names import GRAD_ENTROPY_INDEX, HIGH_FREQ_RATIO_INDEX
from featurelens.core.tables import write_table

PAIR_HEADER = ("l2", "delta1", "delta2", "f_clean", "f_adv")


def _pair(phi_clean: np.ndarray, phi_adv: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    a = np.asarray(phi_clean, dtype=np.float64).ravel()
    b = np.asarray(phi_adv, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise DimensionMismatch(f"feature vectors differ in length: {a.size} vs {b.size}")
    if a.size <= GRAD_ENTROPY_INDEX:
        raise DimensionMismatch(f"vectors need at least {GRAD_ENTROPY_INDEX + 1} entries, got {a.size}")
    return a, b


def displacement(phi_clean: np.ndarray, phi_adv: np.ndarray) -> Tuple[float, float, float]:
    """
    (‖φ′ − φ‖₂, |Δ HighFreqRatio|, |Δ GradEntropy|).

    The last two are coordinates of the difference, so l2² ≥ delta1² + delta2².
    """
    a, b = _pair(phi_clean, phi_adv)
    diff = b - a
    return (
        float(np.linalg.norm(diff)),
        float(abs(diff[HIGH_FREQ_RATIO_INDEX])),
        float(abs(diff[GRAD_ENTROPY_INDEX])),
    )


def construct_separator(phi_clean: np.ndarray, phi_adv: np.ndarray) -> Tuple[np.ndarray, float]:
    """
    Hyperplane w = φ′ − φ, b = −wᵀφ − ½‖w‖².

    The clean vector scores −½‖w‖² and the perturbed one +½‖w‖².

    Raises:
        ZeroDisplacement: the two vectors coincide
    """
    a, b = _pair(phi_clean, phi_adv)
    w = b - a
    sq = float(w @ w)
    if sq == 0.0:
        raise ZeroDisplacement("clean and adversarial feature vectors coincide")
    return w, float(-(w @ a) - 0.5 * sq)


def separator_value(w: np.ndarray, b: float, phi: np.ndarray) -> float:
    """f(φ) = wᵀφ + b."""
    return float(np.asarray(w) @ np.asarray(phi, dtype=np.float64) + b)


@dataclass(frozen=True)
class PairDiagnostic:
    clean_index: int
    adv_index: int
    l2: float
    delta1: float
    delta2: float
    f_clean: float
    f_adv: float


def _random_pairs(
    left: np.ndarray, right: np.ndarray, n_pairs: int, rng: np.random.Generator, distinct: bool
) -> np.ndarray:
    i = rng.choice(left, size=n_pairs)
    j = rng.choice(right, size=n_pairs)
    if distinct:
        clash = i == j
        while clash.any():
            j[clash] = rng.choice(right, size=int(clash.sum()))
            clash = i == j
    return np.stack([i, j], axis=1)


def pair_diagnostics(
    X: np.ndarray, labels: Sequence[int], n_pairs: int = 1000, seed: int = 42
) -> List[PairDiagnostic]:
    """
    Separator check over seeded random (clean, adversarial) row pairs.

    Pairs whose vectors coincide are skipped.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(labels)
    clean = np.flatnonzero(y == 0)
    adv = np.flatnonzero(y == 1)
    if clean.size == 0 or adv.size == 0:
        raise TooFewSamples("pair diagnostics need at least one clean and one adversarial row")

    rng = np.random.default_rng(seed)
    out: List[PairDiagnostic] = []
    for i, j in _random_pairs(clean, adv, n_pairs, rng, distinct=False):
        try:
            w, b = construct_separator(X[i], X[j])
        except ZeroDisplacement:
            continue
        l2, d1, d2 = displacement(X[i], X[j])
        out.append(
            PairDiagnostic(
                clean_index=int(i),
                adv_index=int(j),
                l2=l2,
                delta1=d1,
                delta2=d2,
                f_clean=separator_value(w, b, X[i]),
                f_adv=separator_value(w, b, X[j]),
            )
        )
    return out


def separation_ratio(
    X: np.ndarray, labels: Sequence[int], n_pairs: int = 1000, seed: int = 42
) -> float:
    """
    Mean clean↔adversarial displacement over mean same-class displacement.

    Values above 1 mean perturbation moves samples further than natural
    variation within a class does.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(labels)
    clean = np.flatnonzero(y == 0)
    adv = np.flatnonzero(y == 1)
    if clean.size < 2 or adv.size < 2:
        raise TooFewSamples("separation ratio needs at least two rows of each class")

    rng = np.random.default_rng(seed)
    inter = _random_pairs(clean, adv, n_pairs, rng, distinct=False)
    half = n_pairs // 2
    intra = np.vstack(
        [
            _random_pairs(clean, clean, n_pairs - half, rng, distinct=True),
            _random_pairs(adv, adv, half, rng, distinct=True),
        ]
    )

    def mean_dist(pairs: np.ndarray) -> float:
        return float(np.linalg.norm(X[pairs[:, 1]] - X[pairs[:, 0]], axis=1).mean())

    within = mean_dist(intra)
    if within == 0.0:
        return float("inf")
    return mean_dist(inter) / within


def write_pair_csv(rows: Sequence[PairDiagnostic], path: Union[str, Path]) -> None:
    frame = pd.DataFrame(
        [[getattr(r, name) for name in PAIR_HEADER] for r in rows],
        columns=list(PAIR_HEADER),
        dtype=np.float64,
    )
    write_table(frame, path)
