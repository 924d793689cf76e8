"""Keypoint detection, descriptors, and ratio-test matching."""

import numpy as np
import pytest
from scipy import ndimage

from conftest import smooth_texture
from pixlens.metrics.sift import (
    SIGMA0,
    good_match_fraction,
    sift_features,
    sift_match_score,
)


@pytest.fixture(scope="module")
def textured():
    return smooth_texture(42, (128, 128))


@pytest.fixture(scope="module")
def textured_features(textured):
    return sift_features(textured)


def test_constant_image_has_no_keypoints():
    assert sift_features(np.full((64, 64), 0.5)) == []


def test_too_small_image_rejected():
    with pytest.raises(ValueError):
        sift_features(np.zeros((16, 64)))


def test_descriptors_are_unit_norm(textured_features):
    assert len(textured_features) > 10
    for _, descriptor in textured_features:
        assert descriptor.shape == (128,)
        assert np.linalg.norm(descriptor) == pytest.approx(1.0, abs=1e-6)


def test_feature_determinism(textured, textured_features):
    again = sift_features(textured)
    assert len(again) == len(textured_features)
    for (kp1, d1), (kp2, d2) in zip(textured_features, again):
        assert kp1 == kp2
        np.testing.assert_array_equal(d1, d2)


def test_blob_center_detected():
    yy, xx = np.mgrid[0:64, 0:64]
    blob = np.exp(-((yy - 31.0) ** 2 + (xx - 31.0) ** 2) / (2 * 4.0**2))

    # Oracle: the strongest DoG response of the blob sits at its center.
    inner = ndimage.gaussian_filter(blob, SIGMA0)
    outer = ndimage.gaussian_filter(blob, SIGMA0 * 2 ** (1 / 3))
    dog = outer - inner
    oracle_y, oracle_x = np.unravel_index(np.argmax(np.abs(dog)), dog.shape)
    assert abs(oracle_x - 31) <= 1 and abs(oracle_y - 31) <= 1

    features = sift_features(blob)
    assert features, "blob produced no keypoints"
    distances = [np.hypot(kp.x - 31.0, kp.y - 31.0) for kp, _ in features]
    assert min(distances) <= 2.0


def test_self_match_close_to_one(textured):
    assert sift_match_score(textured, textured) >= 0.9


def test_unrelated_textures_score_poorly():
    a = smooth_texture(1001, (128, 128))
    b = smooth_texture(2002, (128, 128))
    assert sift_match_score(a, b) < 0.075


def test_raw_noise_scores_poorly():
    rng = np.random.default_rng(31)
    a = rng.random((96, 96))
    b = rng.random((96, 96))
    assert sift_match_score(a, b) < 0.075


def test_too_few_features_scores_zero():
    flat = np.full((64, 64), 0.25)
    textured_small = smooth_texture(77, (64, 64))
    assert sift_match_score(flat, textured_small) == 0.0
    assert sift_match_score(textured_small, flat) == 0.0


def test_mask_restriction_filters_keypoints(textured):
    mask = np.zeros((128, 128), dtype=bool)
    mask[:64, :64] = True
    full = sift_match_score(textured, textured)
    masked = sift_match_score(textured, textured, mask_a=mask, mask_b=mask)
    assert 0.0 <= masked <= 1.0
    assert full >= 0.9


def test_good_match_fraction_ratio_edges():
    # d1 == 0 with a distinct second neighbor is a good match; exact
    # duplicates (d1 == d2 == 0) are ambiguous and rejected.
    a = np.array([[1.0, 0.0], [0.0, 1.0]])
    b_good = np.array([[1.0, 0.0], [0.0, 1.0]])
    assert good_match_fraction(a, b_good) == 1.0
    b_dup = np.array([[1.0, 0.0], [1.0, 0.0]])
    assert good_match_fraction(np.array([[1.0, 0.0], [0.70, 0.70]]), b_dup) == 0.0
