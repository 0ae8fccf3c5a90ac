"""
FeatureLens - interpretable feature-based adversarial example detection

The package extracts a fixed 51-dimensional descriptor from each image:
- Frequency statistics of the centered 2-D DFT (9)
- Sobel gradient statistics and orientation histogram (39)
- Edge density and Gabor texture response (2)
- Per-sample MMD against clean reference images (1)
and trains shallow detectors (kernel SVM, MLP, boosted trees) on top of it.
"""

__version__ = "0.1.0"

from featurelens.core.feature_names import FEATURE_NAMES, N_FEATURES
from featurelens.core.image import GrayImage, from_matrix, load_image
from featurelens.detectors import DetectorModel, load_model, predict_scores, save_model, train

__all__ = [
    "FEATURE_NAMES",
    "N_FEATURES",
    "DetectorModel",
    "GrayImage",
    "from_matrix",
    "load_image",
    "load_model",
    "predict_scores",
    "save_model",
    "train",
]
