"""Subject- and background-preservation scores composed from the metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import EmptyMask, EvaluationFailed
from .metrics.histograms import DEFAULT_SIGMA, histogram_correlation, masked_histograms
from .metrics.masks import aligned_iou, normalized_centroid_distance
from .metrics.mse import masked_grayscale_mse, rgb_to_gray
from .metrics.sift import MIN_IMAGE_SIDE, sift_match_score
from .metrics.ssim import WINDOW, ssim
from .model import EditType, SubjectScores

# 1 - min(mse / MSE_NORMALIZER, 1): 0.25 is the MSE of maximally different
# mid-contrast backgrounds under [0, 1] pixels.
MSE_NORMALIZER = 0.25
DILATION_PX = 2


@dataclass
class PreservationContext:
    """Inputs for one edit's subject-preservation bundle."""

    input_image: np.ndarray
    edited_image: np.ndarray
    mask_input: np.ndarray
    mask_edited: np.ndarray
    edit_type: EditType

    def __post_init__(self) -> None:
        if self.input_image.shape != self.edited_image.shape:
            raise ValueError("input and edited images must share dimensions")
        if self.mask_input.shape != self.input_image.shape[:2]:
            raise ValueError("input mask does not fit the input image")
        if self.mask_edited.shape != self.edited_image.shape[:2]:
            raise ValueError("edited mask does not fit the edited image")


def _crop_window(mask: np.ndarray, min_side: int) -> tuple[int, int, int, int]:
    """Mask bbox grown to at least min_side per axis, within image bounds."""
    ys, xs = np.nonzero(mask)
    if ys.size == 0:
        raise EmptyMask("cannot crop around an empty mask")
    h, w = mask.shape
    y0, y1 = int(ys.min()), int(ys.max()) + 1
    x0, x1 = int(xs.min()), int(xs.max()) + 1

    def grow(low: int, high: int, extent: int) -> tuple[int, int]:
        target = min(min_side, extent)
        if high - low >= target:
            return low, high
        low -= (target - (high - low)) // 2
        low = max(0, min(low, extent - target))
        return low, low + target

    y0, y1 = grow(y0, y1, h)
    x0, x1 = grow(x0, x1, w)
    return y0, y1, x0, x1


def _resize_nearest(img: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    h, w = img.shape
    rows = (np.arange(shape[0]) * h) // shape[0]
    cols = (np.arange(shape[1]) * w) // shape[1]
    return img[np.ix_(rows, cols)]


def _subject_sift(ctx: PreservationContext) -> float:
    h, w = ctx.input_image.shape[:2]
    if min(h, w) < MIN_IMAGE_SIDE:
        return 0.0
    ay0, ay1, ax0, ax1 = _crop_window(ctx.mask_input, MIN_IMAGE_SIDE)
    by0, by1, bx0, bx1 = _crop_window(ctx.mask_edited, MIN_IMAGE_SIDE)
    crop_a = rgb_to_gray(ctx.input_image[ay0:ay1, ax0:ax1])
    crop_b = rgb_to_gray(ctx.edited_image[by0:by1, bx0:bx1])
    return sift_match_score(crop_a, crop_b)


def _subject_ssim(ctx: PreservationContext) -> float:
    ay0, ay1, ax0, ax1 = _crop_window(ctx.mask_input, WINDOW)
    by0, by1, bx0, bx1 = _crop_window(ctx.mask_edited, WINDOW)
    crop_a = rgb_to_gray(ctx.input_image[ay0:ay1, ax0:ax1])
    crop_b = rgb_to_gray(ctx.edited_image[by0:by1, bx0:bx1])
    target = (max(crop_a.shape[0], crop_b.shape[0]), max(crop_a.shape[1], crop_b.shape[1]))
    return ssim(_resize_nearest(crop_a, target), _resize_nearest(crop_b, target))


def subject_preservation(
    ctx: PreservationContext, sigma: float = DEFAULT_SIGMA
) -> SubjectScores:
    """Structure, shape, color, and position preservation of the subject.

    Color similarity is omitted for color edits, which modify it on
    purpose. Raises EvaluationFailed when either subject mask is empty,
    so callers can report a lost subject distinctly.
    """
    if not ctx.mask_input.any() or not ctx.mask_edited.any():
        raise EvaluationFailed("subject lost: empty subject mask")

    color: float | None
    if ctx.edit_type is EditType.COLOR_CHANGE:
        color = None
    else:
        color = histogram_correlation(
            masked_histograms(ctx.input_image, ctx.mask_input, sigma),
            masked_histograms(ctx.edited_image, ctx.mask_edited, sigma),
        )
    return SubjectScores(
        sift=_subject_sift(ctx),
        aligned_iou=aligned_iou(ctx.mask_input, ctx.mask_edited),
        ssim=_subject_ssim(ctx),
        position=normalized_centroid_distance(ctx.mask_input, ctx.mask_edited),
        color_similarity=color,
    )


def exclusion_mask(
    subject_masks: list[np.ndarray], shape: tuple[int, int], dilation_px: int = DILATION_PX
) -> np.ndarray:
    """Union of subject masks, dilated to absorb boundary jitter."""
    union = np.zeros(shape, dtype=bool)
    for mask in subject_masks:
        if mask.shape != shape:
            raise ValueError(f"mask {mask.shape} does not fit image {shape}")
        union |= mask
    if dilation_px > 0 and union.any():
        union = ndimage.binary_dilation(
            union, structure=np.ones((3, 3), dtype=bool), iterations=dilation_px
        )
    return union


def background_preservation(
    input_image: np.ndarray,
    edited_image: np.ndarray,
    subject_masks: list[np.ndarray],
    dilation_px: int = DILATION_PX,
    normalizer: float = MSE_NORMALIZER,
) -> float:
    """Similarity of the non-subject regions, 1.0 = perfectly preserved."""
    exclude = exclusion_mask(subject_masks, input_image.shape[:2], dilation_px)
    mse = masked_grayscale_mse(input_image, edited_image, exclude)
    return 1.0 - min(mse / normalizer, 1.0)
