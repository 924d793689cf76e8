"""Scale-invariant keypoints and descriptors, built from the classic recipe.

Scale space uses 3 intervals per octave starting at sigma 1.6 on a
2x-upsampled base image. Candidate extrema are visited in scan order and
the final feature list is sorted by (octave, layer, y, x, orientation),
so output is bit-deterministic for a given input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

SIGMA0 = 1.6
INTERVALS = 3
CONTRAST_THRESHOLD = 0.04
EDGE_RATIO = 10.0
ORIENTATION_BINS = 36
PEAK_RATIO = 0.8
DESCRIPTOR_WIDTH = 4
DESCRIPTOR_BINS = 8
DESCRIPTOR_CLAMP = 0.2
SCALE_FACTOR = 3.0  # descriptor window width per histogram cell, in sigmas
IMAGE_BORDER = 5
MIN_IMAGE_SIDE = 32
LOWE_RATIO = 0.75

_PREFILTER = 0.5 * CONTRAST_THRESHOLD / INTERVALS


@dataclass(frozen=True)
class Keypoint:
    """Feature location in input-image coordinates."""

    x: float
    y: float
    scale: float
    orientation: float


def _upsample_double(img: np.ndarray) -> np.ndarray:
    """Exact 2x bilinear upsampling; base coords are 2x input coords."""
    h, w = img.shape
    down = np.vstack([img[1:], img[-1:]])
    row_avg = (img + down) / 2.0
    out = np.empty((2 * h, 2 * w))
    for src, dst in ((img, out[::2]), (row_avg, out[1::2])):
        right = np.hstack([src[:, 1:], src[:, -1:]])
        dst[:, ::2] = src
        dst[:, 1::2] = (src + right) / 2.0
    return out


def _base_image(img: np.ndarray) -> np.ndarray:
    doubled = _upsample_double(img)
    # The input is assumed pre-blurred at sigma 0.5, i.e. 1.0 once doubled.
    sigma_diff = math.sqrt(max(SIGMA0**2 - 1.0, 0.01))
    return ndimage.gaussian_filter(doubled, sigma_diff, mode="mirror")


def _blur_increments() -> list[float]:
    k = 2.0 ** (1.0 / INTERVALS)
    totals = [SIGMA0 * k**i for i in range(INTERVALS + 3)]
    return [math.sqrt(totals[i] ** 2 - totals[i - 1] ** 2) for i in range(1, len(totals))]


def _gaussian_pyramid(base: np.ndarray) -> list[list[np.ndarray]]:
    increments = _blur_increments()
    octaves: list[list[np.ndarray]] = []
    current = base
    while min(current.shape) >= 2 * IMAGE_BORDER + 3:
        images = [current]
        for sigma in increments:
            images.append(ndimage.gaussian_filter(images[-1], sigma, mode="mirror"))
        octaves.append(images)
        current = images[INTERVALS][::2, ::2]
    return octaves


def _dog_pyramid(gaussians: list[list[np.ndarray]]) -> list[list[np.ndarray]]:
    return [
        [second - first for first, second in zip(images, images[1:])] for images in gaussians
    ]


def _extremum_candidates(dog: list[np.ndarray], layer: int) -> np.ndarray:
    """(y, x) array of strict 26-neighbor extrema in scan order."""
    cube = np.stack([dog[layer - 1], dog[layer], dog[layer + 1]])
    center = cube[1, 1:-1, 1:-1]
    strong = np.abs(center) > _PREFILTER
    if not strong.any():
        return np.empty((0, 2), dtype=np.intp)
    is_max = strong.copy()
    is_min = strong.copy()
    for s in range(3):
        for dy in range(3):
            for dx in range(3):
                if s == 1 and dy == 1 and dx == 1:
                    continue
                neighbor = cube[s, dy : dy + center.shape[0], dx : dx + center.shape[1]]
                is_max &= center > neighbor
                is_min &= center < neighbor
                if not (is_max.any() or is_min.any()):
                    return np.empty((0, 2), dtype=np.intp)
    return np.argwhere(is_max | is_min) + 1


def _cube_gradient(cube: np.ndarray) -> np.ndarray:
    return np.array(
        [
            0.5 * (cube[2, 1, 1] - cube[0, 1, 1]),
            0.5 * (cube[1, 2, 1] - cube[1, 0, 1]),
            0.5 * (cube[1, 1, 2] - cube[1, 1, 0]),
        ]
    )


def _cube_hessian(cube: np.ndarray) -> np.ndarray:
    c = cube[1, 1, 1]
    dss = cube[2, 1, 1] - 2 * c + cube[0, 1, 1]
    dyy = cube[1, 2, 1] - 2 * c + cube[1, 0, 1]
    dxx = cube[1, 1, 2] - 2 * c + cube[1, 1, 0]
    dsy = 0.25 * (cube[2, 2, 1] - cube[2, 0, 1] - cube[0, 2, 1] + cube[0, 0, 1])
    dsx = 0.25 * (cube[2, 1, 2] - cube[2, 1, 0] - cube[0, 1, 2] + cube[0, 1, 0])
    dyx = 0.25 * (cube[1, 2, 2] - cube[1, 2, 0] - cube[1, 0, 2] + cube[1, 0, 0])
    return np.array([[dss, dsy, dsx], [dsy, dyy, dyx], [dsx, dyx, dxx]])


def _localize(
    dog: list[np.ndarray], layer: int, y: int, x: int
) -> tuple[int, float, float, float] | None:
    """Sub-pixel refinement; returns (layer, layer_f, y_f, x_f) or None."""
    shape = dog[0].shape
    for attempt in range(5):
        cube = np.stack(
            [
                dog[layer - 1][y - 1 : y + 2, x - 1 : x + 2],
                dog[layer][y - 1 : y + 2, x - 1 : x + 2],
                dog[layer + 1][y - 1 : y + 2, x - 1 : x + 2],
            ]
        ).astype(float)
        grad = _cube_gradient(cube)
        hess = _cube_hessian(cube)
        try:
            offset = -np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            return None
        if np.all(np.abs(offset) < 0.5):
            break
        layer += int(round(offset[0]))
        y += int(round(offset[1]))
        x += int(round(offset[2]))
        if (
            layer < 1
            or layer > INTERVALS
            or y < IMAGE_BORDER
            or y >= shape[0] - IMAGE_BORDER
            or x < IMAGE_BORDER
            or x >= shape[1] - IMAGE_BORDER
        ):
            return None
    else:
        return None

    value = cube[1, 1, 1] + 0.5 * float(grad @ offset)
    if abs(value) * INTERVALS < CONTRAST_THRESHOLD:
        return None
    trace = hess[1, 1] + hess[2, 2]
    det = hess[1, 1] * hess[2, 2] - hess[1, 2] ** 2
    if det <= 0 or EDGE_RATIO * trace**2 >= (EDGE_RATIO + 1) ** 2 * det:
        return None
    return layer, layer + float(offset[0]), y + float(offset[1]), x + float(offset[2])


def _region_gradients(
    img: np.ndarray, y: int, x: int, radius: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Central-difference gradients on the window, with pixel offsets."""
    h, w = img.shape
    y0, y1 = max(1, y - radius), min(h - 2, y + radius)
    x0, x1 = max(1, x - radius), min(w - 2, x + radius)
    if y0 > y1 or x0 > x1:
        empty = np.empty(0)
        return empty, empty, empty, empty
    ys, xs = np.mgrid[y0 : y1 + 1, x0 : x1 + 1]
    dx = img[ys, xs + 1] - img[ys, xs - 1]
    dy = img[ys + 1, xs] - img[ys - 1, xs]
    return (
        (ys - y).ravel().astype(float),
        (xs - x).ravel().astype(float),
        dx.ravel(),
        dy.ravel(),
    )


def _orientations(img: np.ndarray, y: int, x: int, sigma_oct: float) -> list[float]:
    """Dominant gradient orientations (degrees) around a keypoint."""
    weight_sigma = 1.5 * sigma_oct
    radius = int(round(3.0 * weight_sigma))
    rows, cols, dx, dy = _region_gradients(img, y, x, radius)
    if rows.size == 0:
        return []
    magnitude = np.hypot(dx, dy)
    angle = np.rad2deg(np.arctan2(dy, dx)) % 360.0
    weight = np.exp(-(rows**2 + cols**2) / (2.0 * weight_sigma**2))
    bins = np.round(angle * ORIENTATION_BINS / 360.0).astype(int) % ORIENTATION_BINS
    raw = np.bincount(bins, weights=weight * magnitude, minlength=ORIENTATION_BINS)

    smooth = (
        6.0 * raw
        + 4.0 * (np.roll(raw, 1) + np.roll(raw, -1))
        + (np.roll(raw, 2) + np.roll(raw, -2))
    ) / 16.0
    peak = smooth.max()
    if peak <= 0.0:
        return []
    left = np.roll(smooth, 1)
    right = np.roll(smooth, -1)
    result = []
    for idx in np.nonzero((smooth > left) & (smooth > right) & (smooth >= PEAK_RATIO * peak))[0]:
        l, c, r = left[idx], smooth[idx], right[idx]
        interpolated = (idx + 0.5 * (l - r) / (l - 2.0 * c + r)) % ORIENTATION_BINS
        result.append(float(interpolated * (360.0 / ORIENTATION_BINS)))
    return sorted(result)


def _descriptor(
    img: np.ndarray, y: int, x: int, sigma_oct: float, orientation: float
) -> np.ndarray | None:
    d = DESCRIPTOR_WIDTH
    n = DESCRIPTOR_BINS
    hist_width = SCALE_FACTOR * sigma_oct
    radius = int(round(hist_width * math.sqrt(2) * (d + 1) * 0.5))
    radius = min(radius, int(math.hypot(*img.shape)))
    rows, cols, dx, dy = _region_gradients(img, y, x, radius)
    if rows.size == 0:
        return None

    theta = math.radians(orientation)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    row_rot = cols * sin_t + rows * cos_t
    col_rot = cols * cos_t - rows * sin_t
    row_bin = row_rot / hist_width + 0.5 * d - 0.5
    col_bin = col_rot / hist_width + 0.5 * d - 0.5
    keep = (row_bin > -1) & (row_bin < d) & (col_bin > -1) & (col_bin < d)
    if not keep.any():
        return None
    row_bin, col_bin = row_bin[keep], col_bin[keep]
    row_rot, col_rot = row_rot[keep], col_rot[keep]
    dx, dy = dx[keep], dy[keep]

    magnitude = np.hypot(dx, dy)
    angle = (np.rad2deg(np.arctan2(dy, dx)) - orientation) % 360.0
    ori_bin = angle * n / 360.0
    weight = np.exp(
        -((row_rot / hist_width) ** 2 + (col_rot / hist_width) ** 2) / (2.0 * (0.5 * d) ** 2)
    )
    value = weight * magnitude

    tensor = np.zeros((d + 2, d + 2, n))
    r0 = np.floor(row_bin).astype(int)
    c0 = np.floor(col_bin).astype(int)
    o0 = np.floor(ori_bin).astype(int)
    fr = row_bin - r0
    fc = col_bin - c0
    fo = ori_bin - o0
    for ir, wr in ((0, 1.0 - fr), (1, fr)):
        for ic, wc in ((0, 1.0 - fc), (1, fc)):
            for io, wo in ((0, 1.0 - fo), (1, fo)):
                np.add.at(
                    tensor,
                    (r0 + 1 + ir, c0 + 1 + ic, (o0 + io) % n),
                    value * wr * wc * wo,
                )
    vector = tensor[1:-1, 1:-1, :].ravel()
    norm = np.linalg.norm(vector)
    if norm == 0.0:
        return None
    vector = np.minimum(vector / norm, DESCRIPTOR_CLAMP)
    norm = np.linalg.norm(vector)
    if norm == 0.0:
        return None
    return vector / norm


def sift_features(image: np.ndarray) -> list[tuple[Keypoint, np.ndarray]]:
    """Keypoints with 128-float unit descriptors, deterministically ordered."""
    img = np.asarray(image, dtype=float)
    if img.ndim != 2:
        raise ValueError("sift_features expects a grayscale image")
    if min(img.shape) < MIN_IMAGE_SIDE:
        raise ValueError(f"image {img.shape} smaller than {MIN_IMAGE_SIDE} px per side")

    gaussians = _gaussian_pyramid(_base_image(img))
    dogs = _dog_pyramid(gaussians)

    features: list[tuple[tuple, Keypoint, np.ndarray]] = []
    seen: set[tuple] = set()
    for octave, dog in enumerate(dogs):
        for layer in range(1, INTERVALS + 1):
            for y, x in _extremum_candidates(dog, layer):
                if (
                    y < IMAGE_BORDER
                    or y >= dog[0].shape[0] - IMAGE_BORDER
                    or x < IMAGE_BORDER
                    or x >= dog[0].shape[1] - IMAGE_BORDER
                ):
                    continue
                localized = _localize(dog, layer, int(y), int(x))
                if localized is None:
                    continue
                final_layer, layer_f, y_f, x_f = localized
                sigma_oct = SIGMA0 * 2.0 ** (layer_f / INTERVALS)
                gimg = gaussians[octave][final_layer]
                yi, xi = int(round(y_f)), int(round(x_f))
                for orientation in _orientations(gimg, yi, xi, sigma_oct):
                    key = (octave, final_layer, round(y_f, 6), round(x_f, 6), round(orientation, 6))
                    if key in seen:
                        continue
                    seen.add(key)
                    descriptor = _descriptor(gimg, yi, xi, sigma_oct, orientation)
                    if descriptor is None:
                        continue
                    to_input = 2.0**octave / 2.0
                    keypoint = Keypoint(
                        x=x_f * to_input,
                        y=y_f * to_input,
                        scale=sigma_oct * to_input,
                        orientation=orientation,
                    )
                    features.append((key, keypoint, descriptor))
    features.sort(key=lambda item: item[0])
    return [(kp, desc) for _, kp, desc in features]


def good_match_fraction(desc_a: np.ndarray, desc_b: np.ndarray) -> float:
    """Fraction of A's descriptors passing the nearest-neighbor ratio test."""
    if len(desc_a) < 2 or len(desc_b) < 2:
        return 0.0
    a = np.asarray(desc_a, dtype=float)
    b = np.asarray(desc_b, dtype=float)
    sq = (
        np.sum(a * a, axis=1)[:, None]
        + np.sum(b * b, axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    np.maximum(sq, 0.0, out=sq)
    nearest_two = np.sort(np.partition(sq, 1, axis=1)[:, :2], axis=1)
    d1 = np.sqrt(nearest_two[:, 0])
    d2 = np.sqrt(nearest_two[:, 1])
    good = (d2 > 0.0) & (d1 < LOWE_RATIO * d2)
    return float(good.sum()) / len(a)


def _filter_by_mask(
    features: list[tuple[Keypoint, np.ndarray]], mask: np.ndarray | None
) -> list[tuple[Keypoint, np.ndarray]]:
    if mask is None:
        return features
    h, w = mask.shape
    kept = []
    for kp, desc in features:
        yi = min(max(int(round(kp.y)), 0), h - 1)
        xi = min(max(int(round(kp.x)), 0), w - 1)
        if mask[yi, xi]:
            kept.append((kp, desc))
    return kept


def sift_match_score(
    img_a: np.ndarray,
    img_b: np.ndarray,
    mask_a: np.ndarray | None = None,
    mask_b: np.ndarray | None = None,
) -> float:
    """Fraction of A's descriptors that match well into B, in [0, 1].

    A match is good when nearest/second-nearest L2 distance is below the
    ratio 0.75. Fewer than two features on either side scores 0.
    """
    feats_a = _filter_by_mask(sift_features(img_a), mask_a)
    feats_b = _filter_by_mask(sift_features(img_b), mask_b)
    if len(feats_a) < 2 or len(feats_b) < 2:
        return 0.0
    desc_a = np.stack([d for _, d in feats_a])
    desc_b = np.stack([d for _, d in feats_b])
    return good_match_fraction(desc_a, desc_b)
