"""Frequency-domain features from the centered 2-D DFT."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np
from scipy import fft, stats

from featurelens.core.errors import ImageTooSmall
from featurelens.core.image import GrayImage

LOW_BAND_RADIUS = 1.0 / 8.0
HIGH_BAND_RADIUS = 1.0 / 2.0

LOW, MID, HIGH = 0, 1, 2

# Magnitudes below this fraction of the peak are FFT roundoff and are zeroed.
ROUNDOFF_FLOOR = 1e-13
# log-magnitude spread at or below this is treated as flat
CONTRAST_FLOOR = 1e-12


@dataclass(frozen=True)
class Spectrum:
    """Centered magnitude and power spectrum; DC sits at (H//2, W//2)."""

    magnitude: np.ndarray
    power: np.ndarray

    @property
    def height(self) -> int:
        return int(self.magnitude.shape[0])

    @property
    def width(self) -> int:
        return int(self.magnitude.shape[1])

    @property
    def dc_index(self) -> tuple[int, int]:
        return (self.height // 2, self.width // 2)

    @classmethod
    def from_power(cls, power: np.ndarray) -> Spectrum:
        """Build a spectrum from a centered power grid (synthetic spectra in tests)."""
        power = np.asarray(power, dtype=np.float64)
        return cls(magnitude=np.sqrt(power), power=power)


@dataclass(frozen=True)
class BandPartition:
    """Per-coefficient band label (LOW, MID, HIGH) from normalized radius."""

    labels: np.ndarray
    radius: np.ndarray

    def mask(self, band: int) -> np.ndarray:
        return self.labels == band


@lru_cache(maxsize=16)
def _partition(height: int, width: int, low: float, high: float) -> BandPartition:
    du = (np.arange(height) - height // 2) / (height / 2.0)
    dv = (np.arange(width) - width // 2) / (width / 2.0)
    rho = np.sqrt(du[:, None] ** 2 + dv[None, :] ** 2) / np.sqrt(2.0)
    labels = np.full((height, width), MID, dtype=np.int8)
    labels[rho <= low] = LOW
    labels[rho > high] = HIGH
    labels.setflags(write=False)
    rho.setflags(write=False)
    return BandPartition(labels=labels, radius=rho)


def band_partition(
    height: int,
    width: int,
    low: float = LOW_BAND_RADIUS,
    high: float = HIGH_BAND_RADIUS,
) -> BandPartition:
    """
    Assign every centered coefficient to the low, mid or high band.

    ρ = √((du/(H/2))² + (dv/(W/2))²)/√2 with (du, dv) the offset from DC;
    low is ρ ≤ ``low``, high is ρ > ``high``, mid is everything between.
    """
    if not 0.0 < low < high < 1.0:
        raise ValueError(f"band radii must satisfy 0 < low < high < 1, got {low}, {high}")
    return _partition(int(height), int(width), float(low), float(high))


def dft2(image: Union[GrayImage, np.ndarray]) -> Spectrum:
    """
    Unnormalized forward 2-D DFT, quadrant-swapped so DC is centered.

    Raises:
        ImageTooSmall: if either side is shorter than 2
    """
    pixels = image.pixels if isinstance(image, GrayImage) else np.asarray(image, dtype=np.float64)
    if pixels.shape[0] < 2 or pixels.shape[1] < 2:
        raise ImageTooSmall(f"dft2 needs at least 2x2 pixels, got {pixels.shape}")

    coeffs = fft.fftshift(fft.fft2(pixels))
    magnitude = np.abs(coeffs)
    peak = magnitude.max()
    if peak > 0.0:
        magnitude[magnitude < ROUNDOFF_FLOOR * peak] = 0.0
    return Spectrum(magnitude=magnitude, power=magnitude**2)


def _normalized_entropy(p: np.ndarray) -> float:
    """Shannon entropy of the distribution ``p`` over ln(p.size)."""
    if p.size < 2:
        return 0.0
    nz = p[p > 0.0]
    if np.all(nz == nz[0]):
        return float(np.log(nz.size) / np.log(p.size))
    return float(-np.sum(nz * np.log(nz)) / np.log(p.size))


def _degenerate() -> np.ndarray:
    return np.array([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])


def frequency_features(
    spectrum: Spectrum,
    low: float = LOW_BAND_RADIUS,
    high: float = HIGH_BAND_RADIUS,
) -> np.ndarray:
    """
    Nine spectral statistics, in dictionary order.

    All statistics run over the HW - 1 AC coefficients; the DC term only
    encodes mean brightness. FreqEntropy is normalized by ln(HW - 1), the
    largest entropy over the AC set, so a flat AC spectrum scores exactly 1.
    Skewness and kurtosis are 0 when the log-magnitude contrast is within
    ``CONTRAST_FLOOR`` of flat. A spectrum with no AC power (constant
    image) returns the degenerate convention (1, 0, 0, 0, 0, 0, 0, 0, 0).

    Returns:
        LowFreqRatio, MidFreqRatio, HighFreqRatio, HighFreqConcentration,
        HighFreqMeanMag, FreqEntropy, FreqSkewness, FreqKurtosis, FreqContrast
    """
    bands = band_partition(spectrum.height, spectrum.width, low, high)
    ac = np.ones((spectrum.height, spectrum.width), dtype=bool)
    ac[spectrum.dc_index] = False

    power = spectrum.power[ac]
    magnitude = spectrum.magnitude[ac]
    labels = bands.labels[ac]

    total = power.sum()
    if total <= 0.0:
        return _degenerate()

    ratios = [power[labels == band].sum() / total for band in (LOW, MID, HIGH)]

    high_power = power[labels == HIGH]
    high_total = high_power.sum()
    if high_total > 0.0:
        q = high_power / high_total
        concentration = float(np.sum(q * q))
    else:
        concentration = 0.0
    high_mean_mag = float(magnitude[labels == HIGH].mean()) if np.any(labels == HIGH) else 0.0

    p = power / total
    entropy = _normalized_entropy(p)

    log_mag = np.log1p(magnitude)
    contrast = float(log_mag.std())
    if contrast > CONTRAST_FLOOR * max(1.0, float(np.abs(log_mag).mean())):
        skewness = float(stats.skew(log_mag))
        kurtosis = float(stats.kurtosis(log_mag, fisher=True))
    else:
        skewness = kurtosis = 0.0

    return np.array(
        [
            ratios[0],
            ratios[1],
            ratios[2],
            concentration,
            high_mean_mag,
            entropy,
            skewness,
            kurtosis,
            contrast,
        ]
    )
