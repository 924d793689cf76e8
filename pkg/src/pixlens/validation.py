"""Array validation helpers shared by the metric and pipeline layers."""

from __future__ import annotations

import numpy as np


def as_rgb_image(array: np.ndarray) -> np.ndarray:
    """Validate an (h, w, 3) float image with values in [0, 1]."""
    img = np.asarray(array, dtype=float)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"expected an (h, w, 3) image, got shape {img.shape}")
    if img.size and (img.min() < 0.0 or img.max() > 1.0):
        raise ValueError("image values must lie in [0, 1]")
    return img


def as_gray_image(array: np.ndarray) -> np.ndarray:
    """Validate an (h, w) float image with values in [0, 1]."""
    img = np.asarray(array, dtype=float)
    if img.ndim != 2:
        raise ValueError(f"expected an (h, w) image, got shape {img.shape}")
    if img.size and (img.min() < 0.0 or img.max() > 1.0):
        raise ValueError("image values must lie in [0, 1]")
    return img


def as_mask(array: np.ndarray) -> np.ndarray:
    """Validate a 2-D boolean mask."""
    mask = np.asarray(array)
    if mask.ndim != 2:
        raise ValueError(f"expected a 2-D mask, got shape {mask.shape}")
    return mask.astype(bool)
