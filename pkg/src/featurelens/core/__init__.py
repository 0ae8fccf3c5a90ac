"""Core types: images, the feature dictionary, errors and console output."""

from featurelens.core.errors import FeatureLensError
from featurelens.core.feature_names import FEATURE_NAMES, N_FEATURES, column_names
from featurelens.core.image import GrayImage, from_matrix, load_image, save_raw
from featurelens.core.verbosity import VerbosityLevel

__all__ = [
    "FEATURE_NAMES",
    "N_FEATURES",
    "FeatureLensError",
    "GrayImage",
    "VerbosityLevel",
    "column_names",
    "from_matrix",
    "load_image",
    "save_raw",
]
