"""Feature fusion: 50 structural features, MMD dimension and Z-score scaling."""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from featurelens.config.settings import Config
from featurelens.core.errors import (
    ConstantColumn,
    DimensionMismatch,
    InsufficientReference,
    TooFewSamples,
    UnreadableFile,
)
from featurelens.core.feature_names import (
    FEATURE_NAMES,
    N_FEATURES,
    N_STRUCTURAL,
    column_names,
)
from featurelens.core.image import GrayImage, load_image
from featurelens.core.tables import read_table, write_table
from featurelens.core.verbosity import VerbosityLevel, emit
from featurelens.features.frequency import dft2, frequency_features
from featurelens.features.mmd import MmdReference, build_reference, mmd_scores
from featurelens.features.spatial import (
    edge_density,
    gradient_features,
    sobel,
    texture_response_mean,
)

CSV_HEADER: Tuple[str, ...] = ("path", "label", *column_names())
# std at or below this multiple of max(1, |mean|) is rounding noise
CONSTANT_RTOL = 1e-12


class ScalerState(BaseModel):
    """Per-dimension training mean and population standard deviation."""

    mean: List[float]
    std: List[float]
    notes: List[str] = Field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.mean)

    def _check(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[-1] != self.dim:
            raise DimensionMismatch(f"scaler covers {self.dim} dims, input has {X.shape[-1]}")
        return X

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = self._check(X)
        return (X - np.asarray(self.mean)) / np.asarray(self.std)

    def inverse_transform(self, Z: np.ndarray) -> np.ndarray:
        Z = self._check(Z)
        return Z * np.asarray(self.std) + np.asarray(self.mean)

    def head(self, n: int) -> ScalerState:
        """Scaler restricted to the first ``n`` dimensions."""
        return ScalerState(mean=self.mean[:n], std=self.std[:n], notes=list(self.notes))


def fit_scaler(features: np.ndarray, names: Optional[Sequence[str]] = None) -> ScalerState:
    """
    Column means and population standard deviations.

    Columns with no spread (identical values, or a standard deviation within
    ``CONSTANT_RTOL`` of the column scale) get std = 1 and raise a
    ConstantColumn warning.

    Raises:
        TooFewSamples: fewer than 2 rows
    """
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise TooFewSamples(f"fit_scaler needs at least 2 rows, got shape {X.shape}")

    mean = X.mean(axis=0)
    std = X.std(axis=0)
    flat = (np.ptp(X, axis=0) == 0.0) | (std <= CONSTANT_RTOL * np.maximum(1.0, np.abs(mean)))
    constant = np.flatnonzero(flat)
    notes: List[str] = []
    if constant.size:
        labels = [names[i] if names is not None else str(i) for i in constant]
        message = f"zero-variance columns set to std=1: {', '.join(labels)}"
        warnings.warn(message, ConstantColumn, stacklevel=2)
        notes.append(f"ConstantColumn: {message}")
        std[constant] = 1.0
    return ScalerState(mean=mean.tolist(), std=std.tolist(), notes=notes)


def extract_raw50(image: GrayImage, config: Optional[Config] = None) -> np.ndarray:
    """Structural features (everything except MMDScore) in dictionary order."""
    config = config or Config.create_default()
    freq = frequency_features(dft2(image), config.low_band_radius, config.high_band_radius)
    field_ = sobel(image)
    grad = gradient_features(field_, config.grad_magnitude_bins)
    texture = texture_response_mean(image, config.gabor_wavelengths, config.gabor_orientations)
    out = np.concatenate([freq, grad, [edge_density(field_), texture]])
    assert out.shape == (N_STRUCTURAL,)
    return out


def resolve_jobs(jobs: int) -> int:
    """0 means one worker per logical core."""
    return jobs if jobs > 0 else (os.cpu_count() or 1)


def extract_matrix(
    sources: Sequence[Union[GrayImage, str, Path]],
    config: Optional[Config] = None,
    jobs: Optional[int] = None,
    verbose: Union[bool, int] = False,
) -> np.ndarray:
    """
    Raw 50-dim features for many images, rows in input order.

    Paths are loaded at the configured canonical size inside the workers.
    """
    config = config or Config.create_default()
    workers = resolve_jobs(config.jobs if jobs is None else jobs)

    def one(source: Union[GrayImage, str, Path]) -> np.ndarray:
        image = source if isinstance(source, GrayImage) else load_image(source, config.canonical_size)
        return extract_raw50(image, config)

    rows: List[np.ndarray] = []
    total = len(sources)
    step = max(1, total // 10)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for i, row in enumerate(pool.map(one, sources), 1):
            rows.append(row)
            if i % step == 0 or i == total:
                emit(verbose, VerbosityLevel.DETAIL, f"   extracted {i}/{total}")
    if not rows:
        return np.empty((0, N_STRUCTURAL))
    return np.vstack(rows)


def fit_artifacts(
    raw50: np.ndarray,
    labels: np.ndarray,
    train_mask: np.ndarray,
    seed: int,
    m: int = 500,
) -> Tuple[ScalerState, MmdReference]:
    """
    Two-stage fit on training rows only.

    (1) Z-score the 50 structural columns, (2) build the MMD reference from
    standardized clean rows, (3) score every training row and fit mean/std of
    the resulting 51st column.

    Raises:
        InsufficientReference: fewer than 2 clean training rows
    """
    raw50 = np.asarray(raw50, dtype=np.float64)
    labels = np.asarray(labels)
    train_mask = np.asarray(train_mask, dtype=bool)
    if raw50.shape[1:] != (N_STRUCTURAL,):
        raise DimensionMismatch(f"expected N×{N_STRUCTURAL} raw features, got {raw50.shape}")

    train = raw50[train_mask]
    clean_train = train_mask & (labels == 0)
    if np.count_nonzero(clean_train) < 2:
        raise InsufficientReference(
            f"need at least 2 clean training rows, got {np.count_nonzero(clean_train)}"
        )

    scaler50 = fit_scaler(train, FEATURE_NAMES[:N_STRUCTURAL])
    clean_std = scaler50.transform(raw50[clean_train])
    reference = build_reference(clean_std, min(m, clean_std.shape[0]), seed)

    train_mmd = mmd_scores(scaler50.transform(train), reference)
    mmd_scaler = fit_scaler(train_mmd[:, None], FEATURE_NAMES[N_STRUCTURAL:])

    scaler = ScalerState(
        mean=scaler50.mean + mmd_scaler.mean,
        std=scaler50.std + mmd_scaler.std,
        notes=scaler50.notes + mmd_scaler.notes,
    )
    return scaler, reference


def apply_artifacts(raw50: np.ndarray, scaler: ScalerState, reference: MmdReference) -> np.ndarray:
    """Standardized 51-dim features using previously fitted artifacts."""
    raw50 = np.atleast_2d(np.asarray(raw50, dtype=np.float64))
    if raw50.shape[1] != N_STRUCTURAL:
        raise DimensionMismatch(f"expected {N_STRUCTURAL} raw columns, got {raw50.shape[1]}")
    if scaler.dim != N_FEATURES:
        raise DimensionMismatch(f"scaler must cover {N_FEATURES} dims, covers {scaler.dim}")
    std50 = scaler.head(N_STRUCTURAL).transform(raw50)
    mmd = (mmd_scores(std50, reference) - scaler.mean[-1]) / scaler.std[-1]
    return np.hstack([std50, mmd[:, None]])


@dataclass
class LabeledImage:
    """An image with its label (1 = adversarial) and split name."""

    image: Union[GrayImage, str, Path]
    label: int
    split: str = "train"


def build_dataset(
    images: Sequence[LabeledImage],
    seed: int,
    m: int = 500,
    config: Optional[Config] = None,
    jobs: Optional[int] = None,
) -> Tuple[np.ndarray, ScalerState, MmdReference]:
    """
    Extract, fit on the training split and standardize every row.

    Returns:
        (N×51 standardized features, ScalerState over 51 dims, MmdReference)
    """
    labels = np.array([item.label for item in images])
    train_mask = np.array([item.split == "train" for item in images])
    if not train_mask.any():
        train_mask = np.ones(len(images), dtype=bool)

    raw50 = extract_matrix([item.image for item in images], config, jobs)
    scaler, reference = fit_artifacts(raw50, labels, train_mask, seed, m)
    return apply_artifacts(raw50, scaler, reference), scaler, reference


def select_columns(X: np.ndarray, mask: Optional[Sequence[bool]]) -> np.ndarray:
    """Columns selected by a 51-entry boolean mask (all columns if None)."""
    X = np.asarray(X, dtype=np.float64)
    if mask is None:
        return X
    mask_arr = np.asarray(mask, dtype=bool)
    if mask_arr.shape != (X.shape[1],):
        raise DimensionMismatch(f"mask has {mask_arr.size} entries, data has {X.shape[1]} columns")
    return X[:, mask_arr]


# CSV artifacts


@dataclass
class FeatureTable:
    """Rows of a feature CSV: paths, labels and an N×51 matrix (NaN = empty cell)."""

    paths: List[str]
    labels: np.ndarray
    X: np.ndarray

    def __len__(self) -> int:
        return len(self.paths)


def write_feature_csv(
    path: Union[str, Path], paths: Sequence[str], labels: Sequence[int], X: np.ndarray
) -> None:
    """Write ``path,label,f00_…,f50_…``; NaN cells are left empty."""
    X = np.asarray(X, dtype=np.float64)
    if X.shape != (len(paths), N_FEATURES):
        raise DimensionMismatch(f"expected {len(paths)}x{N_FEATURES} matrix, got {X.shape}")
    frame = pd.DataFrame(X, columns=list(CSV_HEADER[2:]))
    frame.insert(0, "label", np.asarray(labels, dtype=np.int64))
    frame.insert(0, "path", list(paths))
    write_table(frame, path)


def read_feature_csv(path: Union[str, Path]) -> FeatureTable:
    """
    Parse a feature CSV written by ``write_feature_csv``.

    Raises:
        UnreadableFile: missing file or a cell that does not parse
        DimensionMismatch: header differs from the feature dictionary
    """
    dtypes = {"path": str, "label": np.int64, **{name: np.float64 for name in CSV_HEADER[2:]}}
    frame = read_table(
        path, "feature CSV", header=CSV_HEADER, dtype=dtypes, header_error=DimensionMismatch
    )
    return FeatureTable(
        paths=frame["path"].tolist(),
        labels=frame["label"].to_numpy(dtype=np.int64),
        X=frame[list(CSV_HEADER[2:])].to_numpy(dtype=np.float64).reshape(len(frame), N_FEATURES),
    )


def save_artifact(model: BaseModel, path: Union[str, Path]) -> None:
    """Write a pydantic artifact (scaler, reference) as indented JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2) + "\n", encoding="utf-8")


def load_scaler(path: Union[str, Path]) -> ScalerState:
    try:
        return ScalerState.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise UnreadableFile(f"could not load scaler {path}: {e}") from e


def load_reference(path: Union[str, Path]) -> MmdReference:
    try:
        return MmdReference.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise UnreadableFile(f"could not load MMD reference {path}: {e}") from e


