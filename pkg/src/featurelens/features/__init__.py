"""Feature extraction and standardization."""

from featurelens.features.frequency import dft2, frequency_features
from featurelens.features.mmd import MmdReference, build_reference, mmd_score
from featurelens.features.pipeline import (
    FeatureTable,
    ScalerState,
    apply_artifacts,
    build_dataset,
    extract_matrix,
    extract_raw50,
    fit_artifacts,
    fit_scaler,
    read_feature_csv,
    write_feature_csv,
)
from featurelens.features.spatial import gradient_features, sobel, texture_response_mean

__all__ = [
    "FeatureTable",
    "MmdReference",
    "ScalerState",
    "apply_artifacts",
    "build_dataset",
    "build_reference",
    "dft2",
    "extract_matrix",
    "extract_raw50",
    "fit_artifacts",
    "fit_scaler",
    "frequency_features",
    "gradient_features",
    "mmd_score",
    "read_feature_csv",
    "sobel",
    "texture_response_mean",
    "write_feature_csv",
]
