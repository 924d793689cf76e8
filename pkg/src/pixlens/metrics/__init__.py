"""Pixel and mask mathematics: geometry, histograms, SSIM, SIFT, MSE."""

from .histograms import histogram_correlation, masked_histograms
from .masks import (
    aligned_iou,
    intersection_area,
    mask_area,
    mask_centroid,
    normalized_centroid_distance,
)
from .mse import masked_grayscale_mse, rgb_to_gray
from .sift import Keypoint, sift_features, sift_match_score
from .ssim import ssim

__all__ = [
    "Keypoint",
    "aligned_iou",
    "histogram_correlation",
    "intersection_area",
    "mask_area",
    "mask_centroid",
    "masked_grayscale_mse",
    "masked_histograms",
    "normalized_centroid_distance",
    "rgb_to_gray",
    "sift_features",
    "sift_match_score",
    "ssim",
]
