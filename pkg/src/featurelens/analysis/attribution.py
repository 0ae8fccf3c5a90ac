"""Feature attribution: tree split statistics, permutation importance, reduced masks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.stats import spearmanr

from featurelens.analysis.metrics import auc_score
from featurelens.core.errors import (
    DimensionMismatch,
    SingleClassAuc,
    WrongModelKind,
)
from featurelens.core.feature_names import FEATURE_NAMES, N_FEATURES
from featurelens.core.tables import read_table, write_table
from featurelens.detectors.base import DetectorModel, predict_scores
from featurelens.detectors.gbt import LEAF, GbtParams

IMPORTANCE_METRICS = ("gain", "gain_avg", "cover", "weight")
IMPORTANCE_HEADER = ("feature", "gain", "gain_avg", "cover", "weight", "perm_auc_drop")


def _column_index(model: DetectorModel) -> np.ndarray:
    """Position in the 51-dim dictionary of each column the model consumes."""
    if model.feature_mask is None:
        return np.arange(model.input_dim)
    return np.flatnonzero(model.feature_mask)


def _expand(model: DetectorModel, values: np.ndarray) -> np.ndarray:
    width = N_FEATURES if model.feature_mask is not None else max(N_FEATURES, model.input_dim)
    out = np.zeros(width)
    out[_column_index(model)] = values
    return out


def _split_totals(params: GbtParams, n_features: int):
    gain = np.zeros(n_features)
    cover = np.zeros(n_features)
    weight = np.zeros(n_features)
    for tree in params.trees:
        for f, g, c in zip(tree.feature, tree.gain, tree.cover):
            if f == LEAF:
                continue
            gain[f] += g
            cover[f] += c
            weight[f] += 1
    return gain, cover, weight


def gbt_importance(model: DetectorModel, metric: str = "gain") -> np.ndarray:
    """
    Per-feature split statistic summed over every tree.

    ``weight`` counts splits, ``cover`` sums the hessian mass at split nodes,
    ``gain`` sums split gains and ``gain_avg`` divides that by the split
    count. Features never split on score 0. The result is laid out over the
    full dictionary even for masked models.

    Raises:
        WrongModelKind: model is not gradient-boosted trees
    """
    if not isinstance(model.params, GbtParams):
        raise WrongModelKind(f"split importance needs a gbt model, got {model.kind}")
    if metric not in IMPORTANCE_METRICS:
        raise ValueError(f"unknown importance metric {metric!r}; expected one of {IMPORTANCE_METRICS}")

    gain, cover, weight = _split_totals(model.params, model.input_dim)
    if metric == "gain":
        values = gain
    elif metric == "cover":
        values = cover
    elif metric == "weight":
        values = weight
    else:
        values = np.divide(gain, weight, out=np.zeros_like(gain), where=weight > 0)
    return _expand(model, values)


def permutation_importance(
    model: DetectorModel,
    X: np.ndarray,
    y: Sequence[int],
    repeats: int = 10,
    seed: int = 42,
) -> np.ndarray:
    """
    Mean AUC drop when each column is shuffled, over ``repeats`` shuffles.

    Repeat r uses a generator spawned from the root seed, so results do not
    depend on evaluation order. Drops are reported unclipped.

    Raises:
        SingleClassAuc: labels contain one class only
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[1] != model.input_dim:
        raise DimensionMismatch(f"model expects {model.input_dim} columns, got shape {X.shape}")
    if np.unique(y).size < 2:
        raise SingleClassAuc("permutation importance needs both classes")
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")

    baseline = auc_score(predict_scores(model, X), y)
    drops = np.zeros((repeats, X.shape[1]))
    for r, child in enumerate(np.random.SeedSequence(seed).spawn(repeats)):
        rng = np.random.default_rng(child)
        for j in range(X.shape[1]):
            shuffled = X.copy()
            shuffled[:, j] = X[rng.permutation(X.shape[0]), j]
            drops[r, j] = baseline - auc_score(predict_scores(model, shuffled), y)
    return _expand(model, drops.mean(axis=0))


def reduce_features(importances: Sequence[float], k: int = 37) -> List[bool]:
    """Mask keeping the ``k`` most important features; ties go to the lower index."""
    imp = np.asarray(importances, dtype=np.float64)
    if not 0 <= k <= imp.size:
        raise ValueError(f"k must be in [0, {imp.size}], got {k}")
    imp = np.where(np.isnan(imp), -np.inf, imp)
    order = np.lexsort((np.arange(imp.size), -imp))
    mask = np.zeros(imp.size, dtype=bool)
    mask[order[:k]] = True
    return mask.tolist()


def rank_agreement(a: Sequence[float], b: Sequence[float], top: int = 10) -> float:
    """Spearman correlation of two importance vectors over the top-``top`` features of ``a``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    idx = np.lexsort((np.arange(a.size), -a))[:top]
    rho = spearmanr(a[idx], b[idx])[0]
    return float(rho) if not math.isnan(rho) else 0.0


@dataclass
class ImportanceTable:
    """Every importance column over the 51 features; None for columns not computed."""

    gain: Optional[np.ndarray]
    gain_avg: Optional[np.ndarray]
    cover: Optional[np.ndarray]
    weight: Optional[np.ndarray]
    perm_auc_drop: Optional[np.ndarray]
    names: Sequence[str] = FEATURE_NAMES

    def sort_order(self) -> np.ndarray:
        """Descending by gain, or by permutation drop when gain is absent."""
        key = self.gain if self.gain is not None else self.perm_auc_drop
        if key is None:
            return np.arange(len(self.names))
        return np.lexsort((np.arange(len(self.names)), -np.nan_to_num(key, nan=-np.inf)))

    def column(self, name: str) -> Optional[np.ndarray]:
        return getattr(self, name)


def explain(
    model: DetectorModel, X: np.ndarray, y: Sequence[int], repeats: int = 10, seed: int = 42
) -> ImportanceTable:
    """All five importance columns; split columns stay None for non-tree models."""
    if isinstance(model.params, GbtParams):
        split = {m: gbt_importance(model, m) for m in IMPORTANCE_METRICS}
    else:
        split = {m: None for m in IMPORTANCE_METRICS}
    return ImportanceTable(
        perm_auc_drop=permutation_importance(model, X, y, repeats, seed),
        **split,
    )


def write_importance_csv(table: ImportanceTable, path: Union[str, Path]) -> None:
    """One row per feature, sorted by ``sort_order``; columns not computed stay empty."""
    order = table.sort_order()
    frame = pd.DataFrame({"feature": [table.names[i] for i in order]})
    for name in IMPORTANCE_HEADER[1:]:
        col = table.column(name)
        frame[name] = np.full(order.size, np.nan) if col is None else np.asarray(col, float)[order]
    write_table(frame, path)


def read_importance_csv(path: Union[str, Path], column: str = "gain") -> np.ndarray:
    """One importance column in dictionary order (empty cells become NaN)."""
    if column not in IMPORTANCE_HEADER[1:]:
        raise ValueError(f"unknown importance column {column!r}")
    dtypes = {name: np.float64 for name in IMPORTANCE_HEADER[1:]}
    frame = read_table(
        path, "importance CSV", header=IMPORTANCE_HEADER, dtype={"feature": str, **dtypes}
    )

    position = {name: i for i, name in enumerate(FEATURE_NAMES)}
    unknown = [name for name in frame["feature"] if name not in position]
    if unknown:
        raise DimensionMismatch(f"{path}: unknown feature {unknown[0]!r}")
    values = np.full(N_FEATURES, math.nan)
    values[[position[name] for name in frame["feature"]]] = frame[column].to_numpy()
    return values


def write_mask_csv(mask: Sequence[bool], path: Union[str, Path]) -> None:
    if len(mask) != N_FEATURES:
        raise DimensionMismatch(f"mask must have {N_FEATURES} entries, got {len(mask)}")
    frame = pd.DataFrame({"feature": list(FEATURE_NAMES), "selected": [int(bool(k)) for k in mask]})
    write_table(frame, path)


def read_mask_csv(path: Union[str, Path]) -> List[bool]:
    """Mask in dictionary order from a ``feature,selected`` CSV."""
    frame = read_table(path, "mask CSV", header=("feature", "selected"), dtype=str)
    selected = {
        name: flag.strip() in ("1", "true", "True")
        for name, flag in zip(frame["feature"], frame["selected"].fillna(""))
    }
    missing = [name for name in FEATURE_NAMES if name not in selected]
    if missing:
        raise DimensionMismatch(f"{path}: mask is missing {len(missing)} features, e.g. {missing[0]}")
    return [selected[name] for name in FEATURE_NAMES]
