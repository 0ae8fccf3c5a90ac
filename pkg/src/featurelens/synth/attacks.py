"""Epsilon-bounded surrogate perturbations.

Each family injects high-frequency energy the way gradient attacks do, without
needing a target network:

- ``sign``: one step of iid ±ε noise.
- ``iterative``: eight ε/4 steps along the sign of a smoothed random field,
  projected back onto the ℓ∞ ε-ball after every step.
- ``bandpass``: Gaussian noise restricted to the high band, scaled to an ℓ₂
  budget of ε·√(HW)/4.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np
from scipy import fft, ndimage

from featurelens.core.image import GrayImage
from featurelens.features.frequency import HIGH, band_partition

ATTACKS: Tuple[str, ...] = ("sign", "iterative", "bandpass")

ITERATIVE_STEPS = 8
DIRECTION_SMOOTHING = 1.0


def _check_epsilon(epsilon: float) -> None:
    if not 0.0 < epsilon <= 0.5:
        raise ValueError(f"epsilon must lie in (0, 0.5], got {epsilon}")


def sign_noise(x: np.ndarray, epsilon: float, rng: np.random.Generator) -> np.ndarray:
    s = rng.choice(np.array([-1.0, 1.0]), size=x.shape)
    return x + epsilon * s


def iterative_sign(x: np.ndarray, epsilon: float, rng: np.random.Generator) -> np.ndarray:
    lo, hi = x - epsilon, x + epsilon
    out = x.copy()
    for _ in range(ITERATIVE_STEPS):
        direction = ndimage.gaussian_filter(rng.standard_normal(x.shape), DIRECTION_SMOOTHING)
        out = np.clip(out + 0.25 * epsilon * np.sign(direction), lo, hi)
        out = np.clip(out, 0.0, 1.0)
    return out


def bandpass_noise(x: np.ndarray, epsilon: float, rng: np.random.Generator) -> np.ndarray:
    h, w = x.shape
    spectrum = fft.fftshift(fft.fft2(rng.standard_normal(x.shape)))
    spectrum[band_partition(h, w).labels != HIGH] = 0.0
    noise = fft.ifft2(fft.ifftshift(spectrum)).real
    norm = np.linalg.norm(noise)
    if norm == 0.0:
        return x.copy()
    return x + noise * (epsilon * np.sqrt(h * w) / 4.0 / norm)


_ATTACK_FNS = {"sign": sign_noise, "iterative": iterative_sign, "bandpass": bandpass_noise}


def perturb(image: GrayImage, attack: str, epsilon: float, seed: int) -> GrayImage:
    """Apply one surrogate attack; the result is clamped to [0, 1]."""
    if attack not in _ATTACK_FNS:
        raise ValueError(f"unknown attack {attack!r}; expected one of {ATTACKS}")
    _check_epsilon(epsilon)
    out = _ATTACK_FNS[attack](image.pixels, epsilon, np.random.default_rng(seed))
    return GrayImage(np.clip(out, 0.0, 1.0))
