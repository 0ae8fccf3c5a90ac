"""Gradient, edge and texture features."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple, Union

import numpy as np
from scipy import ndimage, signal

from featurelens.core.errors import ImageTooSmall
from featurelens.core.image import GrayImage

SOBEL_X = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
SOBEL_Y = SOBEL_X.T

MAGNITUDE_EPS = 1e-8
ORIENTATION_BINS = 36
MAGNITUDE_BINS = 64

GABOR_WAVELENGTHS: Tuple[float, ...] = (4.0, 8.0)
GABOR_ORIENTATIONS: Tuple[float, ...] = (0.0, 45.0, 90.0, 135.0)


def _pixels(image: Union[GrayImage, np.ndarray]) -> np.ndarray:
    if isinstance(image, GrayImage):
        return image.pixels
    return np.asarray(image, dtype=np.float64)


@dataclass(frozen=True)
class GradientField:
    """Sobel responses with derived magnitude and orientation (degrees in [0, 360))."""

    gx: np.ndarray
    gy: np.ndarray
    magnitude: np.ndarray
    orientation: np.ndarray

    @property
    def valid(self) -> np.ndarray:
        """Pixels where the orientation is defined."""
        return self.magnitude > MAGNITUDE_EPS


def sobel(image: Union[GrayImage, np.ndarray]) -> GradientField:
    """
    3×3 Sobel gradients with replicate border padding.

    x grows with the column index, y with the row index; orientation is
    atan2(gy, gx) mapped to [0°, 360°).
    """
    pixels = _pixels(image)
    if pixels.shape[0] < 3 or pixels.shape[1] < 3:
        raise ImageTooSmall(f"sobel needs at least 3x3 pixels, got {pixels.shape}")

    gx = ndimage.correlate(pixels, SOBEL_X, mode="nearest")
    gy = ndimage.correlate(pixels, SOBEL_Y, mode="nearest")
    magnitude = np.hypot(gx, gy)
    orientation = np.mod(np.degrees(np.arctan2(gy, gx)), 360.0)
    orientation[orientation >= 360.0] = 0.0
    return GradientField(gx=gx, gy=gy, magnitude=magnitude, orientation=orientation)


def orientation_histogram(field: GradientField, bins: int = ORIENTATION_BINS) -> np.ndarray:
    """Magnitude-weighted orientation histogram normalized to sum 1 (uniform if empty)."""
    valid = field.valid
    if not np.any(valid):
        return np.full(bins, 1.0 / bins)
    width = 360.0 / bins
    idx = np.clip((field.orientation[valid] // width).astype(np.int64), 0, bins - 1)
    hist = np.bincount(idx, weights=field.magnitude[valid], minlength=bins)
    return hist / hist.sum()


def magnitude_entropy(field: GradientField, bins: int = MAGNITUDE_BINS) -> float:
    """Shannon entropy of the magnitude histogram over [0, max], normalized by ln(bins)."""
    peak = float(field.magnitude.max())
    if peak <= 0.0:
        return 0.0
    counts, _ = np.histogram(field.magnitude, bins=bins, range=(0.0, peak))
    p = counts[counts > 0] / field.magnitude.size
    return float(-np.sum(p * np.log(p)) / np.log(bins))


def gradient_features(field: GradientField, bins: int = MAGNITUDE_BINS) -> np.ndarray:
    """
    GradMean, GradStd, GradEntropy followed by GradHist_0 … GradHist_35.

    Returns:
        39 reals
    """
    magnitude = field.magnitude
    head = np.array([magnitude.mean(), magnitude.std(), magnitude_entropy(field, bins)])
    return np.concatenate([head, orientation_histogram(field)])


def edge_density(field: GradientField) -> float:
    """Fraction of pixels whose magnitude exceeds mean + one std."""
    magnitude = field.magnitude
    threshold = magnitude.mean() + magnitude.std()
    return float(np.count_nonzero(magnitude > threshold) / magnitude.size)


@lru_cache(maxsize=32)
def gabor_kernel(wavelength: float, orientation_deg: float) -> np.ndarray:
    """
    Real, zero-mean Gabor kernel.

    σ = λ/2, aspect 1, phase 0, half-width ⌈2σ⌉. Orientation 0° oscillates
    along columns, so it responds to vertical stripes.
    """
    sigma = 0.5 * wavelength
    half = int(math.ceil(2.0 * sigma))
    y, x = np.mgrid[-half : half + 1, -half : half + 1].astype(np.float64)
    theta = math.radians(orientation_deg)
    x_theta = x * math.cos(theta) + y * math.sin(theta)
    y_theta = -x * math.sin(theta) + y * math.cos(theta)
    kernel = np.exp(-(x_theta**2 + y_theta**2) / (2.0 * sigma**2)) * np.cos(
        2.0 * math.pi * x_theta / wavelength
    )
    kernel -= kernel.mean()
    kernel.setflags(write=False)
    return kernel


def gabor_response(pixels: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Correlate with replicate padding; output has the input's shape."""
    half = kernel.shape[0] // 2
    padded = np.pad(pixels, half, mode="edge")
    return signal.fftconvolve(padded, kernel[::-1, ::-1], mode="valid")


def texture_response_mean(
    image: Union[GrayImage, np.ndarray],
    wavelengths: Sequence[float] = GABOR_WAVELENGTHS,
    orientations: Sequence[float] = GABOR_ORIENTATIONS,
) -> float:
    """Mean over the Gabor bank of each filter's mean absolute response."""
    pixels = _pixels(image)
    support = 2 * int(math.ceil(max(wavelengths))) + 1
    if pixels.shape[0] < support or pixels.shape[1] < support:
        raise ImageTooSmall(
            f"texture bank needs at least {support}x{support} pixels, got {pixels.shape}"
        )

    responses = [
        np.abs(gabor_response(pixels, gabor_kernel(float(lam), float(theta)))).mean()
        for lam in wavelengths
        for theta in orientations
    ]
    return float(np.mean(responses))
