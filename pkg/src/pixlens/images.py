"""Image file IO: 8-bit PNG/PPM in, normalized float arrays out."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

IMAGE_SUFFIXES = (".png", ".ppm")


def load_image(path: str | Path) -> np.ndarray:
    """Decode an image into an (h, w, 3) float64 array in [0, 1]."""
    with Image.open(path) as img:
        rgb = img.convert("RGB")
        return np.asarray(rgb, dtype=np.float64) / 255.0


def save_image(image: np.ndarray, path: str | Path) -> None:
    """Write a [0, 1] float image as 8-bit PNG/PPM (used by fixtures)."""
    data = np.clip(np.round(np.asarray(image) * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(data, mode="RGB").save(path)


def find_image(directory: str | Path, stem: str) -> Path | None:
    """Locate <stem>.png or <stem>.ppm inside a directory."""
    directory = Path(directory)
    for suffix in IMAGE_SUFFIXES:
        candidate = directory / f"{stem}{suffix}"
        if candidate.is_file():
            return candidate
    return None
