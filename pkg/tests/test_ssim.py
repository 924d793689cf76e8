"""SSIM against a direct single-window formula oracle."""

import numpy as np
import pytest

from conftest import smooth_texture
from pixlens.metrics.ssim import ssim


def ssim_oracle_8x8(a, b):
    """Whole-image SSIM for an 8x8 pair, written from the formula."""
    n = a.size
    mu_a = float(sum(a.ravel())) / n
    mu_b = float(sum(b.ravel())) / n
    var_a = float(sum((v - mu_a) ** 2 for v in a.ravel())) / n
    var_b = float(sum((v - mu_b) ** 2 for v in b.ravel())) / n
    cov = float(sum((x - mu_a) * (y - mu_b) for x, y in zip(a.ravel(), b.ravel()))) / n
    c1 = 0.01**2
    c2 = 0.03**2
    return ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) / (
        (mu_a**2 + mu_b**2 + c1) * (var_a + var_b + c2)
    )


def test_self_similarity_is_one():
    img = smooth_texture(1, (32, 32))
    assert ssim(img, img) == pytest.approx(1.0, abs=1e-9)


def test_matches_oracle_on_8x8_fixtures():
    rng = np.random.default_rng(6)
    for _ in range(10):
        a = rng.random((8, 8))
        b = rng.random((8, 8))
        assert ssim(a, b) == pytest.approx(ssim_oracle_8x8(a, b), abs=1e-6)


def test_checkerboard_vs_inverse_strongly_negative():
    yy, xx = np.mgrid[0:8, 0:8]
    board = ((yy + xx) % 2).astype(float)
    assert ssim(board, 1.0 - board) < -0.5


def test_symmetry():
    rng = np.random.default_rng(13)
    a = rng.random((16, 16))
    b = rng.random((16, 16))
    assert ssim(a, b) == pytest.approx(ssim(b, a), abs=1e-12)


def test_bounded_magnitude():
    rng = np.random.default_rng(14)
    for _ in range(8):
        a = rng.random((12, 12))
        b = rng.random((12, 12))
        assert abs(ssim(a, b)) <= 1.0 + 1e-12


def test_dimension_errors():
    with pytest.raises(ValueError):
        ssim(np.zeros((8, 8)), np.zeros((8, 9)))
    with pytest.raises(ValueError):
        ssim(np.zeros((4, 20)), np.zeros((4, 20)))
