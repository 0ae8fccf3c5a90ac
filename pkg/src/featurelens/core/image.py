"""Grayscale image type, decoding, luma conversion and bilinear resizing."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from featurelens.core.errors import EmptyImage, OutOfRange, UnreadableFile

CANONICAL_SIZE = 256
RAW_MAGIC = "FLGRAY"

# ITU-R BT.601
LUMA_R = 0.299
LUMA_G = 0.587
LUMA_B = 0.114


@dataclass(frozen=True)
class GrayImage:
    """Row-major grayscale intensities in [0, 1]."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        pixels = np.array(self.pixels, dtype=np.float64)
        if pixels.ndim != 2:
            raise ValueError(f"GrayImage needs a 2-D array, got shape {pixels.shape}")
        if pixels.size == 0:
            raise EmptyImage("image has zero pixels")
        if not np.all((pixels >= 0.0) & (pixels <= 1.0)):
            raise OutOfRange("pixel values must lie in [0, 1]")
        pixels.setflags(write=False)
        object.__setattr__(self, "pixels", pixels)

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    def __repr__(self) -> str:
        return f"GrayImage({self.height}x{self.width})"


def luma(rgb: np.ndarray) -> np.ndarray:
    """
    Convert an H×W×3 array in [0, 1] to luma with BT.601 weights.

    Written as g + wr·(r−g) + wb·(b−g), which equals the weighted sum because
    the weights sum to 1, and returns v exactly for gray pixels (v, v, v).
    """
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    return g + LUMA_R * (r - g) + LUMA_B * (b - g)


def _interp_matrix(n_in: int, n_out: int) -> np.ndarray:
    """Linear interpolation weights (n_out × n_in) with half-pixel centers."""
    weights = np.zeros((n_out, n_in))
    scale = n_in / n_out
    for i in range(n_out):
        src = (i + 0.5) * scale - 0.5
        src = min(max(src, 0.0), n_in - 1.0)
        lo = int(np.floor(src))
        hi = min(lo + 1, n_in - 1)
        frac = src - lo
        weights[i, lo] += 1.0 - frac
        weights[i, hi] += frac
    return weights


def resize_bilinear(pixels: np.ndarray, height: int, width: int) -> np.ndarray:
    """Bilinear resize; returns the input unchanged when the size already matches."""
    h, w = pixels.shape
    if (h, w) == (height, width):
        return pixels
    rows = _interp_matrix(h, height)
    cols = _interp_matrix(w, width)
    out = rows @ pixels @ cols.T
    # Convex combinations of values in [0, 1]; clip rounding excursions.
    return np.clip(out, 0.0, 1.0)


def from_matrix(
    values: Union[np.ndarray, list],
    clamp: bool = False,
    size: Optional[int] = CANONICAL_SIZE,
) -> GrayImage:
    """
    Build a GrayImage from an H×W matrix of intensities.

    Args:
        values: 2-D array-like of reals
        clamp: Clamp into [0, 1] instead of raising OutOfRange
        size: Target square resolution; None keeps the native size

    Returns:
        GrayImage at ``size``×``size`` (or native size)
    """
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    if arr.size == 0:
        raise EmptyImage("image has zero pixels")
    if clamp:
        arr = np.clip(arr, 0.0, 1.0)
    elif not np.all((arr >= 0.0) & (arr <= 1.0)):
        bad = arr[~((arr >= 0.0) & (arr <= 1.0))][0]
        raise OutOfRange(f"pixel value {bad!r} outside [0, 1] and clamp is off")
    if size is not None:
        arr = resize_bilinear(arr, size, size)
    return GrayImage(arr)


def _read_raw(path: Path) -> np.ndarray:
    with open(path, encoding="ascii") as f:
        header = f.readline().rstrip("\n")
        parts = header.split()
        if len(parts) != 3 or parts[0] != RAW_MAGIC:
            raise UnreadableFile(f"{path}: bad raw header {header!r}")
        height, width = int(parts[1]), int(parts[2])
        if height == 0 or width == 0:
            raise EmptyImage(f"{path}: zero pixels")
        with warnings.catch_warnings():
            # a header-only file is reported below as a value-count mismatch
            warnings.simplefilter("ignore", UserWarning)
            values = np.loadtxt(f, dtype=np.float64, ndmin=1)
    if values.size != height * width:
        raise UnreadableFile(
            f"{path}: expected {height * width} values, found {values.size}"
        )
    return values.reshape(height, width)


def _read_pillow(path: Path) -> np.ndarray:
    with Image.open(path) as img:
        img.load()
        if img.mode in ("I", "I;16", "I;16B", "I;16L"):
            return np.asarray(img, dtype=np.float64) / 65535.0
        if img.mode in ("1", "L"):
            return np.asarray(img.convert("L"), dtype=np.float64) / 255.0
        rgb = np.asarray(img.convert("RGB"), dtype=np.float64) / 255.0
    return luma(rgb)


def load_image(path: Union[str, Path], size: Optional[int] = CANONICAL_SIZE) -> GrayImage:
    """
    Decode an image file into a canonical GrayImage.

    Supports PNG, JPEG and BMP through Pillow plus the ``FLGRAY`` raw matrix
    format. Color inputs are converted to BT.601 luma.

    Raises:
        UnreadableFile: I/O or decode failure
        EmptyImage: zero pixels
    """
    path = Path(path)
    try:
        with open(path, "rb") as f:
            magic = f.read(len(RAW_MAGIC))
        if magic == RAW_MAGIC.encode("ascii"):
            arr = _read_raw(path)
        else:
            arr = _read_pillow(path)
    except (OSError, UnidentifiedImageError, ValueError, UnicodeDecodeError) as e:
        if isinstance(e, (EmptyImage, UnreadableFile)):
            raise
        raise UnreadableFile(f"could not read image {path}: {e}") from e

    if arr.size == 0:
        raise EmptyImage(f"{path}: zero pixels")
    try:
        return from_matrix(arr, clamp=False, size=size)
    except OutOfRange as e:
        raise UnreadableFile(f"{path}: {e}") from e


def save_raw(image: GrayImage, path: Union[str, Path]) -> None:
    """Write ``image`` in the raw matrix format; reloading is bit-identical."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(
        path,
        image.pixels,
        fmt="%.17g",
        header=f"{RAW_MAGIC} {image.height} {image.width}",
        comments="",
        encoding="ascii",
    )
