"""Second-order gradient boosting of regression trees on logistic loss."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.special import expit

from featurelens.core.verbosity import VerbosityLevel, emit

LEAF = -1
# candidates this close (relative) to the best gain count as tied
GAIN_TIE_RTOL = 1e-9


class Tree(BaseModel):
    """
    Flat binary tree; node 0 is the root.

    Internal nodes send ``x[feature] < threshold`` to ``left`` and everything
    else to ``right``. Leaves have ``feature == -1`` and carry ``value``
    (already multiplied by the learning rate). ``gain`` is the split gain of
    internal nodes and ``cover`` the hessian mass reaching every node.
    """

    model_config = ConfigDict(extra="forbid")

    feature: List[int]
    threshold: List[float]
    left: List[int]
    right: List[int]
    value: List[float]
    gain: List[float]
    cover: List[float]

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    @property
    def n_splits(self) -> int:
        return sum(1 for f in self.feature if f != LEAF)

    def depth(self) -> int:
        best = 0
        stack = [(0, 0)]
        while stack:
            node, d = stack.pop()
            if self.feature[node] == LEAF:
                best = max(best, d)
            else:
                stack.append((self.left[node], d + 1))
                stack.append((self.right[node], d + 1))
        return best

    def predict(self, X: np.ndarray) -> np.ndarray:
        feature = np.asarray(self.feature)
        threshold = np.asarray(self.threshold)
        left = np.asarray(self.left)
        right = np.asarray(self.right)
        node = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.arange(X.shape[0])
        while True:
            f = feature[node]
            internal = f != LEAF
            if not internal.any():
                break
            r = rows[internal]
            go_left = X[r, f[internal]] < threshold[node[internal]]
            node[r] = np.where(go_left, left[node[r]], right[node[r]])
        return np.asarray(self.value)[node]


class GbtParams(BaseModel):
    """Boosted ensemble with its hyperparameters and per-round training loss."""

    model_config = ConfigDict(extra="forbid")

    trees: List[Tree]
    base_score: float = 0.0
    learning_rate: float = 0.1
    reg_lambda: float = 1.0
    max_depth: int = 6
    min_child_hessian: float = 1.0
    n_features: int = 0
    stopped_early: bool = False
    train_loss: List[float] = []


def logistic_loss(margin: np.ndarray, y: np.ndarray) -> float:
    """Mean binary cross-entropy of labels y ∈ {0,1} at logit ``margin``."""
    return float(np.mean(np.logaddexp(0.0, margin) - y * margin))


def logistic_grad_hess(margin: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    p = expit(margin)
    return p - y, p * (1.0 - p)


def split_gain(G_L, H_L, G_R, H_R, reg_lambda: float):
    """½[G_L²/(H_L+λ) + G_R²/(H_R+λ) − (G_L+G_R)²/(H_L+H_R+λ)]."""
    return 0.5 * (
        G_L**2 / (H_L + reg_lambda)
        + G_R**2 / (H_R + reg_lambda)
        - (G_L + G_R) ** 2 / (H_L + H_R + reg_lambda)
    )


@dataclass
class Split:
    feature: int
    threshold: float
    gain: float
    left_rows: np.ndarray
    right_rows: np.ndarray


def best_split(
    X: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    rows: np.ndarray,
    reg_lambda: float,
    min_child_hessian: float,
) -> Optional[Split]:
    """
    Exact greedy search over every feature and every gap between distinct values.

    Candidates within ``GAIN_TIE_RTOL`` of the best gain are tied. Ties go to
    the highest feature index, then the lowest threshold. Returns None when no
    admissible split has positive gain.
    """
    n = rows.size
    if n < 2:
        return None
    Xn = X[rows]
    order = np.argsort(Xn, axis=0, kind="stable")
    xs = np.take_along_axis(Xn, order, axis=0)
    gs = g[rows][order]
    hs = h[rows][order]

    G, H = g[rows].sum(), h[rows].sum()
    G_L = np.cumsum(gs, axis=0)[:-1]
    H_L = np.cumsum(hs, axis=0)[:-1]
    G_R, H_R = G - G_L, H - H_L

    admissible = (xs[1:] > xs[:-1]) & (H_L >= min_child_hessian) & (H_R >= min_child_hessian)
    if not admissible.any():
        return None
    gains = np.where(admissible, split_gain(G_L, H_L, G_R, H_R, reg_lambda), -np.inf)

    best = float(gains.max())
    if not best > 0.0:
        return None
    tied = gains >= best - GAIN_TIE_RTOL * best
    feature = int(np.flatnonzero(tied.any(axis=0))[-1])
    pos = int(np.argmax(tied[:, feature]))
    gain = float(gains[pos, feature])

    lo, hi = xs[pos, feature], xs[pos + 1, feature]
    threshold = lo + 0.5 * (hi - lo)
    if threshold <= lo:
        threshold = hi
    goes_left = Xn[:, feature] < threshold
    return Split(
        feature=int(feature),
        threshold=float(threshold),
        gain=gain,
        left_rows=rows[goes_left],
        right_rows=rows[~goes_left],
    )


def grow_tree(
    X: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    max_depth: int,
    learning_rate: float,
    reg_lambda: float,
    min_child_hessian: float,
) -> Tree:
    """Depth-first growth; leaf weight is −G/(H+λ) scaled by the learning rate."""
    nodes = {
        key: [] for key in ("feature", "threshold", "left", "right", "value", "gain", "cover")
    }

    def add(rows: np.ndarray, depth: int) -> int:
        idx = len(nodes["feature"])
        for key in nodes:
            nodes[key].append(0)
        G, H = float(g[rows].sum()), float(h[rows].sum())
        nodes["cover"][idx] = H

        split = best_split(X, g, h, rows, reg_lambda, min_child_hessian) if depth < max_depth else None
        if split is None:
            nodes["feature"][idx] = LEAF
            nodes["threshold"][idx] = 0.0
            nodes["left"][idx] = nodes["right"][idx] = LEAF
            nodes["value"][idx] = -learning_rate * G / (H + reg_lambda)
            nodes["gain"][idx] = 0.0
            return idx

        nodes["feature"][idx] = split.feature
        nodes["threshold"][idx] = split.threshold
        nodes["value"][idx] = 0.0
        nodes["gain"][idx] = split.gain
        nodes["left"][idx] = add(split.left_rows, depth + 1)
        nodes["right"][idx] = add(split.right_rows, depth + 1)
        return idx

    add(np.arange(X.shape[0]), 0)
    return Tree(**nodes)


def train_gbt(
    X: np.ndarray,
    y: np.ndarray,
    n_trees: int = 100,
    max_depth: int = 6,
    learning_rate: float = 0.1,
    reg_lambda: float = 1.0,
    min_child_hessian: float = 1.0,
    verbose: Union[bool, int] = False,
) -> GbtParams:
    """
    Boost up to ``n_trees`` trees from base score 0 (logit).

    Boosting stops early when a round's root cannot be split and its leaf no
    longer moves the margin; the stop is recorded on the result.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    margin = np.zeros(y.size)
    trees: List[Tree] = []
    losses = [logistic_loss(margin, y)]
    stopped_early = False

    for round_ in range(1, n_trees + 1):
        g, h = logistic_grad_hess(margin, y)
        tree = grow_tree(X, g, h, max_depth, learning_rate, reg_lambda, min_child_hessian)
        if tree.n_splits == 0 and abs(tree.value[0]) < 1e-12:
            stopped_early = True
            break
        trees.append(tree)
        margin += tree.predict(X)
        losses.append(logistic_loss(margin, y))
        emit(
            verbose,
            VerbosityLevel.DEBUG,
            f"   round {round_}: loss {losses[-1]:.6f}, {tree.n_splits} splits",
        )

    emit(verbose, VerbosityLevel.DETAIL, f"   gbt: {len(trees)} trees, final loss {losses[-1]:.5f}")
    return GbtParams(
        trees=trees,
        learning_rate=learning_rate,
        reg_lambda=reg_lambda,
        max_depth=max_depth,
        min_child_hessian=min_child_hessian,
        n_features=X.shape[1],
        stopped_early=stopped_early,
        train_loss=losses,
    )


def gbt_margin(params: GbtParams, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    margin = np.full(X.shape[0], params.base_score)
    for tree in params.trees:
        margin += tree.predict(X)
    return margin


def gbt_proba(params: GbtParams, X: np.ndarray) -> np.ndarray:
    """logistic(base + Σ shrunken tree outputs)."""
    return expit(gbt_margin(params, X))


def gbt_parameter_count(params: GbtParams) -> int:
    """(feature, threshold) per split plus one value per leaf."""
    splits = sum(t.n_splits for t in params.trees)
    leaves = sum(t.n_nodes - t.n_splits for t in params.trees)
    return 2 * splits + leaves
