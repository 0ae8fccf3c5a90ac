"""Shallow detectors: kernel SVM, MLP and gradient-boosted trees."""

from featurelens.detectors.base import (
    DETECTOR_KINDS,
    FORMAT_VERSION,
    DetectorModel,
    predict_labels,
    predict_scores,
    score_images,
    select_features,
    train,
)
from featurelens.detectors.gbt import GbtParams, Tree
from featurelens.detectors.mlp import MlpParams
from featurelens.detectors.persistence import load_model, save_model
from featurelens.detectors.svm import SvmParams

__all__ = [
    "DETECTOR_KINDS",
    "FORMAT_VERSION",
    "DetectorModel",
    "GbtParams",
    "MlpParams",
    "SvmParams",
    "Tree",
    "load_model",
    "predict_labels",
    "predict_scores",
    "save_model",
    "score_images",
    "select_features",
    "train",
]
