"""Structural similarity with uniform 8x8 sliding windows."""

from __future__ import annotations

import numpy as np

WINDOW = 8
K1 = 0.01
K2 = 0.03
DYNAMIC_RANGE = 1.0  # images are normalized to [0, 1]


def _window_means(img: np.ndarray, window: int) -> np.ndarray:
    """Mean of every window x window patch at stride 1 (integral image)."""
    padded = np.zeros((img.shape[0] + 1, img.shape[1] + 1))
    np.cumsum(np.cumsum(img, axis=0), axis=1, out=padded[1:, 1:])
    sums = (
        padded[window:, window:]
        - padded[:-window, window:]
        - padded[window:, :-window]
        + padded[:-window, :-window]
    )
    return sums / (window * window)


def ssim(a: np.ndarray, b: np.ndarray, window: int = WINDOW) -> float:
    """Mean local SSIM over all windows; result lies in [-1, 1].

    Uniform window weighting, population variance, C1=(K1*L)^2 and
    C2=(K2*L)^2 with L=1 for normalized images.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"image shapes differ: {a.shape} vs {b.shape}")
    if min(a.shape) < window:
        raise ValueError(f"image {a.shape} smaller than the {window}x{window} window")

    mu_a = _window_means(a, window)
    mu_b = _window_means(b, window)
    ex_aa = _window_means(a * a, window)
    ex_bb = _window_means(b * b, window)
    ex_ab = _window_means(a * b, window)

    var_a = ex_aa - mu_a * mu_a
    var_b = ex_bb - mu_b * mu_b
    cov = ex_ab - mu_a * mu_b

    c1 = (K1 * DYNAMIC_RANGE) ** 2
    c2 = (K2 * DYNAMIC_RANGE) ** 2
    scores = ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) / (
        (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    )
    return float(scores.mean())
