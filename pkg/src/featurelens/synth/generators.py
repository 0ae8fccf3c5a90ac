"""Seeded clean-image generators."""

from __future__ import annotations

import math
from typing import Callable, Dict, Tuple

import numpy as np
from scipy import ndimage

from featurelens.core.image import CANONICAL_SIZE, GrayImage

CLEAN_KINDS: Tuple[str, ...] = ("smooth", "blobs", "sinusoid", "blurred_noise")

SINUSOID_MAX_RADIUS = 1.0 / 8.0


def _grid(size: int) -> Tuple[np.ndarray, np.ndarray]:
    """Row and column coordinates in [-0.5, 0.5)."""
    coords = np.arange(size) / size - 0.5
    return coords[:, None], coords[None, :]


def smooth(rng: np.random.Generator, size: int) -> np.ndarray:
    """Affine ramp c + a·x + b·y."""
    y, x = _grid(size)
    c = rng.uniform(0.3, 0.7)
    a, b = rng.uniform(-0.3, 0.3, size=2)
    return c + a * x + b * y


def blobs(rng: np.random.Generator, size: int) -> np.ndarray:
    """Mid-gray background plus 3 to 8 Gaussian bumps of either sign."""
    y, x = _grid(size)
    out = np.full((size, size), 0.5)
    for _ in range(int(rng.integers(3, 9))):
        cy, cx = rng.uniform(-0.5, 0.5, size=2)
        sigma = rng.uniform(1.0 / 16.0, 1.0 / 4.0)
        amplitude = rng.uniform(-0.4, 0.4)
        out += amplitude * np.exp(-((y - cy) ** 2 + (x - cx) ** 2) / (2.0 * sigma**2))
    return out


def sinusoid(rng: np.random.Generator, size: int) -> np.ndarray:
    """
    Up to four integer-frequency plane waves, all inside the low band.

    A wave with (ku, kv) cycles per image sits at normalized radius
    √((2ku/size)² + (2kv/size)²)/√2, which is kept ≤ 1/8.
    """
    y, x = _grid(size)
    limit = SINUSOID_MAX_RADIUS * math.sqrt(2.0) * size / 2.0
    k_max = max(1, int(math.floor(limit)))
    count = int(rng.integers(1, 5))
    amplitude = 0.45 / count
    out = np.full((size, size), 0.5)
    placed = 0
    while placed < count:
        ku, kv = rng.integers(-k_max, k_max + 1, size=2)
        if (ku == 0 and kv == 0) or math.hypot(ku, kv) > limit:
            continue
        phase = rng.uniform(0.0, 2.0 * math.pi)
        out += amplitude * np.cos(2.0 * math.pi * (ku * y + kv * x) + phase)
        placed += 1
    return out


def blurred_noise(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniform noise passed three times through a 5×5 box filter."""
    out = rng.uniform(0.0, 1.0, size=(size, size))
    for _ in range(3):
        out = ndimage.uniform_filter(out, size=5, mode="nearest")
    return out


GENERATORS: Dict[str, Callable[[np.random.Generator, int], np.ndarray]] = {
    "smooth": smooth,
    "blobs": blobs,
    "sinusoid": sinusoid,
    "blurred_noise": blurred_noise,
}


def gen_clean(kind: str, seed: int, size: int = CANONICAL_SIZE) -> GrayImage:
    """Generate one clean image of ``kind``; identical seeds give identical pixels."""
    try:
        generator = GENERATORS[kind]
    except KeyError:
        raise ValueError(f"unknown clean image kind {kind!r}; expected one of {CLEAN_KINDS}") from None
    pixels = generator(np.random.default_rng(seed), size)
    return GrayImage(np.clip(pixels, 0.0, 1.0))
