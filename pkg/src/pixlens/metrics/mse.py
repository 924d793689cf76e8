"""Masked grayscale mean-squared error for background comparison."""

from __future__ import annotations

import numpy as np

from ..errors import EmptyBackground

LUMA = np.array([0.299, 0.587, 0.114])


def rgb_to_gray(image: np.ndarray) -> np.ndarray:
    """Luma-weighted grayscale of an (h, w, 3) float image."""
    return np.asarray(image, dtype=float) @ LUMA


def masked_grayscale_mse(a: np.ndarray, b: np.ndarray, exclude: np.ndarray) -> float:
    """MSE between the grayscale images over pixels outside `exclude`."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"image shapes differ: {a.shape} vs {b.shape}")
    if exclude.shape != a.shape[:2]:
        raise ValueError(f"exclude mask {exclude.shape} does not fit image {a.shape[:2]}")
    keep = ~np.asarray(exclude, dtype=bool)
    if not keep.any():
        raise EmptyBackground("exclusion mask covers the whole image")
    diff = rgb_to_gray(a)[keep] - rgb_to_gray(b)[keep]
    return float(np.mean(diff * diff))
