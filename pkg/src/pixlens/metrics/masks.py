"""Binary-mask geometry: areas, centroids, aligned IoU, centroid distance."""

from __future__ import annotations

import math

import numpy as np

from ..errors import EmptyMask


def mask_area(mask: np.ndarray) -> int:
    """Number of true pixels."""
    return int(np.count_nonzero(mask))


def mask_centroid(mask: np.ndarray) -> tuple[float, float]:
    """Arithmetic mean (cx, cy) of true-pixel coordinates.

    Pixel centers sit at integer coordinates, so a single true pixel at
    column 3, row 5 has centroid (3.0, 5.0).
    """
    ys, xs = np.nonzero(mask)
    if ys.size == 0:
        raise EmptyMask("centroid of an empty mask")
    return float(xs.mean()), float(ys.mean())


def _check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"mask shapes differ: {a.shape} vs {b.shape}")


def intersection_area(a: np.ndarray, b: np.ndarray) -> int:
    """Count of jointly-true pixels; masks must share dimensions."""
    _check_same_shape(a, b)
    return int(np.count_nonzero(np.logical_and(a, b)))


def _origin_aligned(mask: np.ndarray) -> np.ndarray:
    """Crop to the tight hull, i.e. translate the bbox corner to (0, 0)."""
    ys, xs = np.nonzero(mask)
    if ys.size == 0:
        raise EmptyMask("cannot align an empty mask")
    return mask[ys.min() : ys.max() + 1, xs.min() : xs.max() + 1]


def aligned_iou(a: np.ndarray, b: np.ndarray) -> float:
    """IoU after translating both masks so their bbox corners coincide.

    Translation-invariant by construction; 1.0 iff the masks are equal
    up to translation.
    """
    ca = _origin_aligned(np.asarray(a, dtype=bool))
    cb = _origin_aligned(np.asarray(b, dtype=bool))
    height = max(ca.shape[0], cb.shape[0])
    width = max(ca.shape[1], cb.shape[1])
    pa = np.zeros((height, width), dtype=bool)
    pb = np.zeros((height, width), dtype=bool)
    pa[: ca.shape[0], : ca.shape[1]] = ca
    pb[: cb.shape[0], : cb.shape[1]] = cb
    union = np.count_nonzero(pa | pb)
    inter = np.count_nonzero(pa & pb)
    return inter / union


def normalized_centroid_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Euclidean centroid distance divided by the image diagonal."""
    _check_same_shape(a, b)
    ax, ay = mask_centroid(a)
    bx, by = mask_centroid(b)
    height, width = a.shape
    diagonal = math.hypot(width, height)
    return math.hypot(ax - bx, ay - by) / diagonal
