"""Two-hidden-layer ReLU perceptron with a 2-way softmax head, trained with Adam."""

from __future__ import annotations

import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.special import log_softmax, softmax

from featurelens.core.verbosity import VerbosityLevel, emit

Layer = Tuple[np.ndarray, np.ndarray]


class DenseLayer(BaseModel):
    """Weights (in × out) and bias (out) of one affine layer."""

    model_config = ConfigDict(extra="forbid")

    weights: List[List[float]]
    bias: List[float]


class MlpParams(BaseModel):
    """Layer stack plus a record of how training ended."""

    model_config = ConfigDict(extra="forbid")

    layers: List[DenseLayer]
    epochs_run: int = 0
    best_epoch: int = 0
    stopped_early: bool = False
    best_valid_loss: Optional[float] = None

    @classmethod
    def from_arrays(cls, layers: Sequence[Layer], **kwargs) -> MlpParams:
        return cls(
            layers=[DenseLayer(weights=W.tolist(), bias=b.tolist()) for W, b in layers], **kwargs
        )

    def arrays(self) -> List[Layer]:
        return [
            (np.asarray(layer.weights, dtype=np.float64), np.asarray(layer.bias, dtype=np.float64))
            for layer in self.layers
        ]

    @property
    def sizes(self) -> List[int]:
        return [len(self.layers[0].weights)] + [len(layer.bias) for layer in self.layers]


def he_init(sizes: Sequence[int], rng: np.random.Generator) -> List[Layer]:
    """N(0, 2/fan_in) weights, zero biases."""
    return [
        (rng.normal(0.0, math.sqrt(2.0 / n_in), size=(n_in, n_out)), np.zeros(n_out))
        for n_in, n_out in zip(sizes[:-1], sizes[1:])
    ]


def forward(
    layers: Sequence[Layer], X: np.ndarray
) -> Tuple[np.ndarray, List[np.ndarray], List[np.ndarray]]:
    """
    Returns:
        (logits, layer inputs, hidden pre-activations)
    """
    inputs: List[np.ndarray] = []
    pre: List[np.ndarray] = []
    a = X
    for k, (W, b) in enumerate(layers):
        inputs.append(a)
        z = a @ W + b
        if k < len(layers) - 1:
            pre.append(z)
            a = np.maximum(z, 0.0)
        else:
            a = z
    return a, inputs, pre


def cross_entropy(logits: np.ndarray, y: np.ndarray) -> float:
    """Mean negative log-likelihood of integer labels under softmax(logits)."""
    return float(-np.mean(log_softmax(logits, axis=1)[np.arange(y.size), y]))


def loss_and_grads(layers: Sequence[Layer], X: np.ndarray, y: np.ndarray) -> Tuple[float, List[Layer]]:
    """Mean cross-entropy and its analytic gradient for every (W, b)."""
    logits, inputs, pre = forward(layers, X)
    n = y.size
    delta = softmax(logits, axis=1)
    delta[np.arange(n), y] -= 1.0
    delta /= n

    grads: List[Layer] = [None] * len(layers)  # type: ignore[list-item]
    for k in range(len(layers) - 1, -1, -1):
        W, _ = layers[k]
        grads[k] = (inputs[k].T @ delta, delta.sum(axis=0))
        if k > 0:
            delta = (delta @ W.T) * (pre[k - 1] > 0.0)
    return cross_entropy(logits, y), grads


class Adam:
    """Adaptive moment estimation over a list of (W, b) pairs, updated in place."""

    def __init__(
        self,
        layers: Sequence[Layer],
        lr: float = 1e-3,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
    ):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = [np.zeros_like(p) for layer in layers for p in layer]
        self.v = [np.zeros_like(p) for layer in layers for p in layer]

    def step(self, layers: Sequence[Layer], grads: Sequence[Layer]) -> None:
        self.t += 1
        c1 = 1.0 - self.beta1**self.t
        c2 = 1.0 - self.beta2**self.t
        params = [p for layer in layers for p in layer]
        flat = [g for layer in grads for g in layer]
        for i, (p, g) in enumerate(zip(params, flat)):
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g
            p -= self.lr * (self.m[i] / c1) / (np.sqrt(self.v[i] / c2) + self.eps)


def train_mlp(
    X: np.ndarray,
    y: np.ndarray,
    valid: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    hidden: Sequence[int] = (64, 32),
    learning_rate: float = 1e-3,
    batch_size: int = 32,
    max_epochs: int = 200,
    fixed_epochs: int = 100,
    patience: int = 20,
    seed: int = 0,
    verbose: Union[bool, int] = False,
) -> MlpParams:
    """
    Minibatch Adam on softmax cross-entropy.

    With a validation set, trains up to ``max_epochs`` and keeps the weights of
    the epoch with the lowest validation loss, stopping after ``patience``
    epochs without improvement. Without one, runs exactly ``fixed_epochs``.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    rng = np.random.default_rng(seed)
    layers = he_init([X.shape[1], *hidden, 2], rng)
    adam = Adam(layers, lr=learning_rate)

    epochs = max_epochs if valid is not None else fixed_epochs
    best_loss = math.inf
    best_layers = [(W.copy(), b.copy()) for W, b in layers]
    best_epoch = 0
    stale = 0
    stopped_early = False
    epoch = 0

    for epoch in range(1, epochs + 1):
        order = rng.permutation(y.size)
        for start in range(0, y.size, batch_size):
            batch = order[start : start + batch_size]
            _, grads = loss_and_grads(layers, X[batch], y[batch])
            adam.step(layers, grads)

        if valid is None:
            continue
        val_loss = cross_entropy(forward(layers, valid[0])[0], np.asarray(valid[1], dtype=np.int64))
        emit(verbose, VerbosityLevel.DEBUG, f"   epoch {epoch}: valid loss {val_loss:.5f}")
        if val_loss < best_loss:
            best_loss, best_epoch, stale = val_loss, epoch, 0
            best_layers = [(W.copy(), b.copy()) for W, b in layers]
        else:
            stale += 1
            if stale >= patience:
                stopped_early = True
                break

    if valid is None:
        best_layers, best_epoch = layers, epoch

    emit(
        verbose,
        VerbosityLevel.DETAIL,
        f"   mlp: {epoch} epochs, best epoch {best_epoch}"
        + (f", valid loss {best_loss:.4f}" if valid is not None else ""),
    )
    return MlpParams.from_arrays(
        best_layers,
        epochs_run=epoch,
        best_epoch=best_epoch,
        stopped_early=stopped_early,
        best_valid_loss=best_loss if valid is not None else None,
    )


def mlp_proba(params: MlpParams, X: np.ndarray) -> np.ndarray:
    """Softmax probability of class 1."""
    logits, _, _ = forward(params.arrays(), np.asarray(X, dtype=np.float64))
    return softmax(logits, axis=1)[:, 1]


def mlp_parameter_count(params: MlpParams) -> int:
    sizes = params.sizes
    return sum(n_in * n_out + n_out for n_in, n_out in zip(sizes[:-1], sizes[1:]))
