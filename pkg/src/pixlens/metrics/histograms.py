"""Smoothed per-channel color histograms and their correlation."""

from __future__ import annotations

import math

import numpy as np

from ..errors import EmptyMask

BINS = 256
DEFAULT_SIGMA = 5.0


def smoothing_matrix(sigma: float, bins: int = BINS) -> np.ndarray:
    """Truncated-Gaussian smoothing as a (bins, bins) linear map.

    The kernel is cut at radius 3*sigma and renormalized per source bin,
    so smoothing preserves total histogram mass exactly.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    radius = max(1, int(math.ceil(3.0 * sigma)))
    offsets = np.arange(-radius, radius + 1)
    kernel = np.exp(-0.5 * (offsets / sigma) ** 2)
    matrix = np.zeros((bins, bins))
    for src in range(bins):
        dst = src + offsets
        valid = (dst >= 0) & (dst < bins)
        weights = kernel[valid]
        matrix[dst[valid], src] = weights / weights.sum()
    return matrix


def masked_histograms(
    image: np.ndarray, mask: np.ndarray, sigma: float = DEFAULT_SIGMA
) -> np.ndarray:
    """256-bin smoothed histograms of the masked pixels, shape (3, 256).

    The image holds floats in [0, 1]; values are quantized to the 8-bit
    grid before binning.
    """
    if image.shape[:2] != mask.shape:
        raise ValueError(f"image {image.shape[:2]} and mask {mask.shape} differ")
    pixels = image[np.asarray(mask, dtype=bool)]
    if pixels.size == 0:
        raise EmptyMask("histogram of an empty region")
    levels = np.clip(np.round(pixels * 255.0), 0, 255).astype(np.intp)
    smoother = smoothing_matrix(sigma)
    hists = np.empty((3, BINS))
    for channel in range(3):
        raw = np.bincount(levels[:, channel], minlength=BINS).astype(float)
        hists[channel] = smoother @ raw
    return hists


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    if np.array_equal(a, b):
        return 1.0
    da = a - a.mean()
    db = b - b.mean()
    var_a = float(da @ da)
    var_b = float(db @ db)
    if var_a == 0.0 or var_b == 0.0:
        # Two flat histograms have identical shape; one flat vs one
        # structured do not correlate at all.
        return 1.0 if var_a == var_b else 0.0
    r = float(da @ db) / math.sqrt(var_a * var_b)
    return max(-1.0, min(1.0, r))


def histogram_correlation(h1: np.ndarray, h2: np.ndarray) -> float:
    """Mean per-channel Pearson correlation, in [-1, 1]."""
    h1 = np.asarray(h1, dtype=float)
    h2 = np.asarray(h2, dtype=float)
    if h1.shape != h2.shape or h1.ndim != 2:
        raise ValueError("expected matching (channels, bins) histograms")
    scores = [_pearson(h1[c], h2[c]) for c in range(h1.shape[0])]
    return float(np.mean(scores))
