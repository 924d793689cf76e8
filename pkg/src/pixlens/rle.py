"""Binary-mask run-length codec used by the detection archive format.

Encoding is column-major (Fortran order) with the leading-zeros
convention: the first count is the length of the initial run of zeros,
so a mask whose first column-major pixel is true starts with a 0 count.
"""

from __future__ import annotations

import numpy as np

from .errors import MalformedMask


def decode_rle(counts: list[int], width: int, height: int) -> np.ndarray:
    """Decode run-length counts into a boolean (height, width) mask."""
    counts = list(counts)
    if any(c < 0 for c in counts):
        raise MalformedMask(f"negative run length in {counts!r}")
    total = sum(counts)
    if total != width * height:
        raise MalformedMask(
            f"run lengths sum to {total}, expected {width}x{height}={width * height}"
        )
    flat = np.zeros(width * height, dtype=bool)
    pos = 0
    value = False
    for count in counts:
        if value:
            flat[pos : pos + count] = True
        pos += count
        value = not value
    return flat.reshape((height, width), order="F")


def encode_rle(mask: np.ndarray) -> list[int]:
    """Encode a boolean mask into canonical column-major run lengths."""
    flat = np.asarray(mask, dtype=bool).ravel(order="F")
    if flat.size == 0:
        return [0]
    boundaries = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    edges = np.concatenate(([0], boundaries, [flat.size]))
    runs = np.diff(edges).tolist()
    if flat[0]:
        runs.insert(0, 0)
    return [int(r) for r in runs]
