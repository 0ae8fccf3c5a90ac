"""Uniform train/predict interface over the three detector kinds."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy.special import expit

from featurelens.config.settings import Config
from featurelens.core.errors import (
    DimensionMismatch,
    NonFiniteInput,
    SingleClass,
    TooFewSamples,
)
from featurelens.core.feature_names import FEATURE_NAMES, N_FEATURES
from featurelens.core.image import GrayImage
from featurelens.core.verbosity import VerbosityLevel, emit, format_section
from featurelens.detectors.gbt import GbtParams, gbt_parameter_count, gbt_proba, train_gbt
from featurelens.detectors.mlp import MlpParams, mlp_parameter_count, mlp_proba, train_mlp
from featurelens.detectors.svm import SvmParams, svm_decision, svm_parameter_count, train_svm
from featurelens.features.mmd import MmdReference
from featurelens.features.pipeline import ScalerState, apply_artifacts, extract_matrix, select_columns

FORMAT_VERSION = 1
MIN_TRAIN_ROWS = 4

DetectorKind = Literal["svm", "mlp", "gbt"]
DETECTOR_KINDS: Tuple[str, ...] = ("svm", "mlp", "gbt")
PARAMS_BY_KIND = {"svm": SvmParams, "mlp": MlpParams, "gbt": GbtParams}


class DetectorModel(BaseModel):
    """A trained detector with the extraction artifacts it was fitted against."""

    format_version: int = FORMAT_VERSION
    kind: DetectorKind
    hyperparams: Dict[str, Any] = Field(default_factory=dict)
    scaler: Optional[ScalerState] = None
    mmd_reference: Optional[MmdReference] = None
    feature_mask: Optional[List[bool]] = None
    params: Union[SvmParams, MlpParams, GbtParams]
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _params_match_kind(self) -> DetectorModel:
        expected = PARAMS_BY_KIND[self.kind]
        if not isinstance(self.params, expected):
            raise ValueError(
                f"kind {self.kind!r} needs {expected.__name__}, got {type(self.params).__name__}"
            )
        return self

    @property
    def input_dim(self) -> int:
        """Width of the feature rows ``predict_scores`` accepts."""
        if self.feature_mask is not None:
            return int(sum(self.feature_mask))
        return int(self.metadata.get("n_features", N_FEATURES))

    @property
    def feature_names(self) -> List[str]:
        """Names of the columns the model consumes, in order."""
        if self.feature_mask is None:
            if self.input_dim == N_FEATURES:
                return list(FEATURE_NAMES)
            return [f"x{i}" for i in range(self.input_dim)]
        return [name for name, keep in zip(FEATURE_NAMES, self.feature_mask) if keep]

    def parameter_count(self) -> int:
        if isinstance(self.params, SvmParams):
            return svm_parameter_count(self.params)
        if isinstance(self.params, MlpParams):
            return mlp_parameter_count(self.params)
        return gbt_parameter_count(self.params)

    def __repr__(self) -> str:
        return f"DetectorModel(kind={self.kind}, d={self.input_dim}, params={self.parameter_count()})"


def _check_training_data(X: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise DimensionMismatch(f"expected N×d features and N labels, got {X.shape} and {y.shape}")
    if X.shape[0] < MIN_TRAIN_ROWS:
        raise TooFewSamples(f"training needs at least {MIN_TRAIN_ROWS} rows, got {X.shape[0]}")
    if not np.all(np.isfinite(X)):
        raise NonFiniteInput("training features contain NaN or infinite values")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("labels must be 0 (clean) or 1 (adversarial)")
    if np.unique(y).size < 2:
        raise SingleClass(f"training labels contain only class {int(y[0])}")
    return X, y.astype(np.int64)


def _hyperparams(kind: str, config: Config, d: int) -> Dict[str, Any]:
    if kind == "svm":
        return {
            "C": config.svm_c,
            "gamma": config.svm_gamma if config.svm_gamma is not None else 1.0 / d,
            "tol": config.svm_tol,
            "max_passes": config.svm_max_passes,
        }
    if kind == "mlp":
        return {
            "hidden": list(config.mlp_hidden),
            "learning_rate": config.mlp_learning_rate,
            "beta1": 0.9,
            "beta2": 0.999,
            "eps": 1e-8,
            "batch_size": config.mlp_batch_size,
            "max_epochs": config.mlp_max_epochs,
            "fixed_epochs": config.mlp_fixed_epochs,
            "patience": config.mlp_patience,
        }
    return {
        "n_trees": config.gbt_trees,
        "max_depth": config.gbt_max_depth,
        "learning_rate": config.gbt_learning_rate,
        "reg_lambda": config.gbt_reg_lambda,
        "min_child_hessian": config.gbt_min_child_hessian,
        "split_penalty": 0.0,
        "base_score": 0.0,
    }


def train(
    kind: str,
    X: np.ndarray,
    y: np.ndarray,
    valid: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    seed: int = 42,
    config: Optional[Config] = None,
    scaler: Optional[ScalerState] = None,
    reference: Optional[MmdReference] = None,
    feature_mask: Optional[Sequence[bool]] = None,
    verbose: Union[bool, int] = False,
) -> DetectorModel:
    """
    Train one detector on standardized feature rows.

    ``X`` holds the columns the model will consume: when ``feature_mask`` is
    given its width must equal the number of selected features.

    Raises:
        SingleClass: labels contain one class only
        NonFiniteInput: NaN or infinity in X
        TooFewSamples: fewer than 4 rows
    """
    if kind not in DETECTOR_KINDS:
        raise ValueError(f"unknown detector kind {kind!r}; expected one of {DETECTOR_KINDS}")
    config = config or Config.create_default()
    X, y = _check_training_data(X, y)
    mask = [bool(v) for v in feature_mask] if feature_mask is not None else None
    if mask is not None and (len(mask) != N_FEATURES or sum(mask) != X.shape[1]):
        raise DimensionMismatch(
            f"mask selects {sum(mask)} of {len(mask)} features, data has {X.shape[1]} columns"
        )
    if valid is not None:
        valid = (np.asarray(valid[0], dtype=np.float64), np.asarray(valid[1], dtype=np.int64))
        if valid[0].shape[1] != X.shape[1]:
            raise DimensionMismatch(
                f"validation rows have {valid[0].shape[1]} columns, expected {X.shape[1]}"
            )

    hp = _hyperparams(kind, config, X.shape[1])
    emit(
        verbose,
        VerbosityLevel.BASIC,
        f"Training {kind} on {X.shape[0]} rows × {X.shape[1]} features",
    )
    settings = "\n".join(f"{name}: {value}" for name, value in hp.items())
    emit(verbose, VerbosityLevel.DEBUG, format_section("Hyperparameters", settings))

    params: Union[SvmParams, MlpParams, GbtParams]
    if kind == "svm":
        params = train_svm(
            X, y, C=hp["C"], gamma=hp["gamma"], tol=hp["tol"],
            max_passes=hp["max_passes"], seed=seed, verbose=verbose,
        )
    elif kind == "mlp":
        params = train_mlp(
            X, y, valid=valid, hidden=hp["hidden"], learning_rate=hp["learning_rate"],
            batch_size=hp["batch_size"], max_epochs=hp["max_epochs"],
            fixed_epochs=hp["fixed_epochs"], patience=hp["patience"], seed=seed, verbose=verbose,
        )
    else:
        params = train_gbt(
            X, y, n_trees=hp["n_trees"], max_depth=hp["max_depth"],
            learning_rate=hp["learning_rate"], reg_lambda=hp["reg_lambda"],
            min_child_hessian=hp["min_child_hessian"], verbose=verbose,
        )

    model = DetectorModel(
        kind=kind,  # type: ignore[arg-type]
        hyperparams=hp,
        scaler=scaler,
        mmd_reference=reference,
        feature_mask=mask,
        params=params,
        metadata={
            "seed": seed,
            "n_features": X.shape[1],
            "n_train": int(X.shape[0]),
            "n_valid": int(valid[0].shape[0]) if valid is not None else 0,
        },
    )
    model.metadata["parameter_count"] = model.parameter_count()
    return model


def predict_scores(model: DetectorModel, X: np.ndarray) -> np.ndarray:
    """
    Probability of the adversarial class for every row.

    svm: logistic of the decision value; mlp: softmax of class 1;
    gbt: logistic of the boosted margin.

    Raises:
        DimensionMismatch: row width differs from the model's input width
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.input_dim:
        raise DimensionMismatch(f"model expects {model.input_dim} features, got {X.shape[1]}")
    if isinstance(model.params, SvmParams):
        return expit(svm_decision(model.params, X))
    if isinstance(model.params, MlpParams):
        return mlp_proba(model.params, X)
    return gbt_proba(model.params, X)


def predict_labels(model: DetectorModel, X: np.ndarray, threshold: float = 0.5) -> np.ndarray:
    return (predict_scores(model, X) >= threshold).astype(np.int64)


def select_features(model: DetectorModel, X51: np.ndarray) -> np.ndarray:
    """Pick the model's columns out of full 51-dim standardized rows."""
    return select_columns(X51, model.feature_mask)


def score_images(
    model: DetectorModel,
    images: Sequence[Union[GrayImage, str, Path]],
    config: Optional[Config] = None,
    jobs: Optional[int] = None,
) -> np.ndarray:
    """
    Extract, standardize with the model's own artifacts, and score.

    Raises:
        ValueError: the model carries no scaler or MMD reference
    """
    if model.scaler is None or model.mmd_reference is None:
        raise ValueError("model carries no scaler/reference; score feature rows instead")
    raw50 = extract_matrix(images, config, jobs)
    X51 = apply_artifacts(raw50, model.scaler, model.mmd_reference)
    return predict_scores(model, select_features(model, X51))
