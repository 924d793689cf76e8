"""Run-length codec: hand-decoded oracles and round-trip identities."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pixlens.errors import MalformedMask
from pixlens.rle import decode_rle, encode_rle


def decode_oracle(counts, width, height):
    """Independent decoder: fill a column-major pixel list run by run."""
    flat = []
    value = False
    for count in counts:
        flat.extend([value] * count)
        value = not value
    grid = [[False] * width for _ in range(height)]
    for index, bit in enumerate(flat):
        x, y = divmod(index, height)[0], index % height
        grid[y][x] = bit
    return np.array(grid, dtype=bool)


def test_all_false():
    mask = decode_rle([4], 2, 2)
    assert not mask.any()
    assert encode_rle(mask) == [4]


def test_all_true():
    mask = decode_rle([0, 4], 2, 2)
    assert mask.all()
    assert encode_rle(mask) == [0, 4]


def test_column_major_example():
    # Column-major pixels (F, T, T, F) land on the anti-diagonal.
    mask = decode_rle([1, 2, 1], 2, 2)
    assert mask.tolist() == [[False, True], [True, False]]
    np.testing.assert_array_equal(mask, decode_oracle([1, 2, 1], 2, 2))


def test_matches_oracle_on_random_counts():
    rng = np.random.default_rng(3)
    for _ in range(50):
        width, height = rng.integers(1, 9, size=2)
        total = int(width * height)
        counts = []
        remaining = total
        while remaining > 0:
            run = int(rng.integers(1, remaining + 1))
            counts.append(run)
            remaining -= run
        np.testing.assert_array_equal(
            decode_rle(counts, width, height), decode_oracle(counts, width, height)
        )


def test_sum_mismatch_raises():
    with pytest.raises(MalformedMask):
        decode_rle([3], 2, 2)


def test_negative_count_raises():
    with pytest.raises(MalformedMask):
        decode_rle([-1, 5], 2, 2)


def test_exhaustive_3x3_round_trip():
    for bits in range(512):
        mask = np.array([(bits >> i) & 1 for i in range(9)], dtype=bool).reshape(3, 3)
        counts = encode_rle(mask)
        np.testing.assert_array_equal(decode_rle(counts, 3, 3), mask)
        assert all(c > 0 for c in counts[1:]), "no zero-length interior runs"


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_round_trip_random(width, height, seed):
    mask = np.random.default_rng(seed).random((height, width)) < 0.5
    counts = encode_rle(mask)
    np.testing.assert_array_equal(decode_rle(counts, width, height), mask)
    # canonical counts round-trip from the counts side as well
    assert encode_rle(decode_rle(counts, width, height)) == counts
