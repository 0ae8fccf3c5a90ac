"""Unit tests for gradient, edge and texture features."""

import math

import numpy as np
import pytest

from featurelens.core.errors import ImageTooSmall
from featurelens.core.image import GrayImage
from featurelens.features.spatial import (
    edge_density,
    gabor_kernel,
    gabor_response,
    gradient_features,
    magnitude_entropy,
    orientation_histogram,
    sobel,
    texture_response_mean,
)


def ramp(n: int = 16, axis: int = 0, decreasing: bool = False) -> GrayImage:
    values = np.linspace(0.0, 1.0, n)
    if decreasing:
        values = values[::-1]
    grid = np.tile(values[:, None], (1, n)) if axis == 0 else np.tile(values[None, :], (n, 1))
    return GrayImage(grid)


class TestSobel:
    """Tests for gradient computation and the orientation histogram."""

    def test_too_small(self):
        """Test that a 2×2 image raises ImageTooSmall."""
        with pytest.raises(ImageTooSmall):
            sobel(np.zeros((2, 2)))

    def test_vertical_ramp_points_down(self):
        """Test that brightness growing with the row index lands in the 90° bin."""
        hist = orientation_histogram(sobel(ramp(axis=0)))
        assert hist[9] == pytest.approx(1.0)

    def test_horizontal_ramp_points_right(self):
        """Test that brightness growing with the column index lands in bin 0."""
        hist = orientation_histogram(sobel(ramp(axis=1)))
        assert hist[0] == pytest.approx(1.0)

    def test_decreasing_ramp_points_left(self):
        """Test that brightness falling along columns lands in the 180° bin."""
        hist = orientation_histogram(sobel(ramp(axis=1, decreasing=True)))
        assert hist[18] == pytest.approx(1.0)

    def test_constant_image_uniform_histogram(self):
        """Test the uniform histogram convention when no gradient is defined."""
        field = sobel(np.full((8, 8), 0.5))
        np.testing.assert_allclose(orientation_histogram(field), 1.0 / 36)
        assert magnitude_entropy(field) == 0.0

    def test_histogram_sums_to_one(self):
        """Test normalization on a random image."""
        field = sobel(np.random.default_rng(0).uniform(size=(16, 16)))
        assert orientation_histogram(field).sum() == pytest.approx(1.0)
        assert 0.0 < magnitude_entropy(field) <= 1.0


class TestGradientFeatures:
    """Tests for the 39 gradient statistics and edge density."""

    def test_shape_and_order(self):
        """Test layout: mean, std, entropy, then 36 histogram bins."""
        field = sobel(np.random.default_rng(1).uniform(size=(16, 16)))
        f = gradient_features(field)
        assert f.shape == (39,)
        assert f[0] == pytest.approx(field.magnitude.mean())
        assert f[1] == pytest.approx(field.magnitude.std())
        assert f[3:].sum() == pytest.approx(1.0)

    def test_constant_image(self):
        """Test zero magnitude statistics and zero edge density on a flat image."""
        field = sobel(np.full((8, 8), 0.25))
        f = gradient_features(field)
        assert f[0] == 0.0
        assert f[1] == 0.0
        assert f[2] == 0.0
        assert edge_density(field) == 0.0

    def test_edge_density_single_step(self):
        """Test that a step edge marks only pixels next to the step."""
        pixels = np.zeros((16, 16))
        pixels[:, 8:] = 1.0
        density = edge_density(sobel(pixels))
        assert density == pytest.approx(2 * 16 / 256)


class TestTexture:
    """Tests for the Gabor bank."""

    def test_kernel_sizes(self):
        """Test kernel support 2⌈λ⌉+1 for both wavelengths."""
        assert gabor_kernel(4.0, 0.0).shape == (9, 9)
        assert gabor_kernel(8.0, 45.0).shape == (17, 17)

    def test_kernel_zero_mean(self):
        """Test that every kernel sums to zero."""
        for lam in (4.0, 8.0):
            for theta in (0.0, 45.0, 90.0, 135.0):
                assert gabor_kernel(lam, theta).sum() == pytest.approx(0.0, abs=1e-12)

    def test_constant_image_has_no_texture(self):
        """Test that a flat image gives a texture response of zero."""
        assert texture_response_mean(np.full((32, 32), 0.6)) == pytest.approx(0.0, abs=1e-10)

    def test_orientation_selectivity(self):
        """Test that the 0° kernel prefers stripes that vary along columns."""
        c = np.arange(32)
        vertical = np.tile(0.5 + 0.5 * np.cos(2 * math.pi * c / 4.0), (32, 1))
        horizontal = vertical.T
        kernel = gabor_kernel(4.0, 0.0)
        strong = np.abs(gabor_response(vertical, kernel)).mean()
        weak = np.abs(gabor_response(horizontal, kernel)).mean()
        assert strong > 5.0 * weak

    def test_response_keeps_shape(self):
        """Test that filtering preserves the image size."""
        pixels = np.random.default_rng(2).uniform(size=(20, 24))
        assert gabor_response(pixels, gabor_kernel(8.0, 90.0)).shape == (20, 24)

    def test_too_small_for_bank(self):
        """Test that images smaller than the largest kernel are rejected."""
        with pytest.raises(ImageTooSmall):
            texture_response_mean(np.zeros((10, 10)))

    def test_texture_positive_on_noise(self):
        """Test a strictly positive response on random texture."""
        img = GrayImage(np.random.default_rng(3).uniform(size=(32, 32)))
        assert texture_response_mean(img) > 0.0


def clamped(pixels: np.ndarray, r: int, c: int) -> float:
    h, w = pixels.shape
    return float(pixels[min(max(r, 0), h - 1), min(max(c, 0), w - 1)])


def gradient_oracle(pixels: np.ndarray, orientation_bins: int = 36, magnitude_bins: int = 64):
    """The 39 gradient values by explicit loops over pixels and kernel taps."""
    sx = [[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]]
    h, w = pixels.shape
    mags, angles = [], []
    for r in range(h):
        for c in range(w):
            window = [[clamped(pixels, r + a - 1, c + b - 1) for b in range(3)] for a in range(3)]
            gx = sum(sx[a][b] * window[a][b] for a in range(3) for b in range(3))
            gy = sum(sx[b][a] * window[a][b] for a in range(3) for b in range(3))
            mags.append(math.hypot(gx, gy))
            angles.append(math.degrees(math.atan2(gy, gx)) % 360.0)

    n = len(mags)
    mean = math.fsum(mags) / n
    std = math.sqrt(math.fsum((m - mean) ** 2 for m in mags) / n)

    peak = max(mags)
    edges = np.linspace(0.0, peak, magnitude_bins + 1)
    counts = [0] * magnitude_bins
    for m in mags:
        k = int(np.searchsorted(edges, m, side="right")) - 1
        counts[min(k, magnitude_bins - 1)] += 1
    entropy = -math.fsum((k / n) * math.log(k / n) for k in counts if k) / math.log(magnitude_bins)

    hist = [0.0] * orientation_bins
    for m, theta in zip(mags, angles):
        if m > 1e-8:
            hist[min(int(theta // (360.0 / orientation_bins)), orientation_bins - 1)] += m
    total = math.fsum(hist)
    return np.array([mean, std, entropy] + [v / total for v in hist])


def gabor_oracle(pixels: np.ndarray, wavelength: float, orientation_deg: float) -> np.ndarray:
    """Gabor correlation with replicate borders by direct summation over kernel taps."""
    sigma = wavelength / 2.0
    half = math.ceil(2.0 * sigma)
    theta = math.radians(orientation_deg)
    taps = {}
    for dy in range(-half, half + 1):
        for dx in range(-half, half + 1):
            xt = dx * math.cos(theta) + dy * math.sin(theta)
            yt = -dx * math.sin(theta) + dy * math.cos(theta)
            taps[dy, dx] = math.exp(-(xt**2 + yt**2) / (2 * sigma**2)) * math.cos(
                2 * math.pi * xt / wavelength
            )
    offset = math.fsum(taps.values()) / len(taps)
    padded = np.pad(pixels, half, mode="edge")
    h, w = pixels.shape
    out = np.zeros((h, w))
    for (dy, dx), value in taps.items():
        out += (value - offset) * padded[half + dy : half + dy + h, half + dx : half + dx + w]
    return out


class TestOracles:
    """Feature values against direct evaluations of their definitions."""

    def test_gradient_features_match_loops(self):
        """Test all 39 gradient values against a pixel-by-pixel evaluation."""
        pixels = np.random.default_rng(5).uniform(size=(12, 14))
        np.testing.assert_allclose(
            gradient_features(sobel(pixels)), gradient_oracle(pixels), rtol=1e-10, atol=1e-12
        )

    @pytest.mark.parametrize("wavelength,orientation", [(4.0, 0.0), (4.0, 45.0), (8.0, 135.0)])
    def test_gabor_matches_direct_sum(self, wavelength, orientation):
        """Test FFT filtering against summing shifted copies of the padded image."""
        pixels = np.random.default_rng(6).uniform(size=(19, 21))
        np.testing.assert_allclose(
            gabor_response(pixels, gabor_kernel(wavelength, orientation)),
            gabor_oracle(pixels, wavelength, orientation),
            atol=1e-10,
        )

    def test_texture_mean_matches_direct_sum(self):
        """Test the bank average against the direct filter responses."""
        pixels = np.random.default_rng(7).uniform(size=(20, 20))
        expected = np.mean(
            [
                np.abs(gabor_oracle(pixels, lam, theta)).mean()
                for lam in (4.0, 8.0)
                for theta in (0.0, 45.0, 90.0, 135.0)
            ]
        )
        assert texture_response_mean(pixels) == pytest.approx(expected, rel=1e-9)


class TestInvariances:
    """How the spatial features react to simple image transforms."""

    def test_quarter_turn_shifts_histogram_nine_bins(self):
        """Test that rotating by 90° rolls the 36-bin orientation histogram by nine."""
        pixels = np.random.default_rng(8).uniform(size=(24, 24))
        before = orientation_histogram(sobel(pixels))
        after = orientation_histogram(sobel(np.rot90(pixels)))
        np.testing.assert_allclose(after, np.roll(before, -9), atol=1e-12)

    def test_quarter_turn_keeps_magnitude_statistics(self):
        """Test that GradMean, GradStd and GradEntropy survive a 90° rotation."""
        pixels = np.random.default_rng(9).uniform(size=(24, 24))
        before = gradient_features(sobel(pixels))[:3]
        after = gradient_features(sobel(np.rot90(pixels)))[:3]
        np.testing.assert_allclose(after, before, rtol=1e-12)

    def test_texture_ignores_brightness_offset(self):
        """Test that adding a constant to every pixel leaves the texture response unchanged."""
        pixels = 0.5 * np.random.default_rng(10).uniform(size=(32, 32))
        assert texture_response_mean(pixels + 0.25) == pytest.approx(
            texture_response_mean(pixels), abs=1e-12
        )

    def test_gradients_ignore_brightness_offset(self):
        """Test that a constant offset leaves every gradient feature unchanged."""
        pixels = 0.5 * np.random.default_rng(11).uniform(size=(16, 16))
        np.testing.assert_allclose(
            gradient_features(sobel(pixels + 0.25)), gradient_features(sobel(pixels)), atol=1e-9
        )
