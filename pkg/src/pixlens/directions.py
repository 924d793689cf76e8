"""Direction vocabulary for positional edits.

Angles are computed in a y-up mathematical frame: pixel rows grow
downward, so pixel displacements have their y component negated before
any comparison with these reference vectors.
"""

from __future__ import annotations

import math
import re

import numpy as np

from .errors import UnknownDirection

_SQ2 = math.sqrt(2.0) / 2.0

# Keyword -> unit vector in the y-up frame. Composite keywords are the
# normalized sum of their axis vectors.
DIRECTION_VECTORS: dict[str, tuple[float, float]] = {
    "below": (0.0, -1.0),
    "under": (0.0, -1.0),
    "above": (0.0, 1.0),
    "over": (0.0, 1.0),
    "on top of": (0.0, 1.0),
    "left": (-1.0, 0.0),
    "right": (1.0, 0.0),
    "top left": (-_SQ2, _SQ2),
    "top right": (_SQ2, _SQ2),
    "bottom left": (-_SQ2, -_SQ2),
    "bottom right": (_SQ2, -_SQ2),
}

# Image-section keywords for position replacement; values are section
# midpoints on a [-1, 1] axis pair (y-up frame).
POSITION_POINTS: dict[str, tuple[float, float]] = {
    "left": (-1.0, 0.0),
    "right": (1.0, 0.0),
    "center": (0.0, 0.0),
    "top": (0.0, 1.0),
    "bottom": (0.0, -1.0),
}

_ARTICLES = {"a", "an", "the", "of", "to", "at", "in", "on", "is"}


def direction_unit_vector(keyword: str) -> np.ndarray:
    """Unit vector for a recognized direction keyword (y-up frame)."""
    key = " ".join(keyword.lower().split())
    try:
        vec = DIRECTION_VECTORS[key]
    except KeyError:
        raise UnknownDirection(f"unrecognized direction keyword: {keyword!r}") from None
    return np.array(vec, dtype=float)


def _find_keyword(text: str, vocabulary: dict[str, object]) -> tuple[str, int] | None:
    """Longest keyword present in text with its match position, or None."""
    normalized = " ".join(text.lower().split())
    for keyword in sorted(vocabulary, key=len, reverse=True):
        match = re.search(rf"\b{re.escape(keyword)}\b", normalized)
        if match:
            return keyword, match.start()
    return None


def extract_direction(text: str) -> tuple[str, str]:
    """Split a positional `to` attribute into (keyword, object label).

    The object label is whatever precedes the direction phrase, with
    trailing articles stripped ("bag on top of" -> ("on top of", "bag")).
    """
    found = _find_keyword(text, DIRECTION_VECTORS)
    if found is None:
        raise UnknownDirection(f"no direction keyword in {text!r}")
    keyword, start = found
    prefix_tokens = " ".join(text.lower().split())[:start].split()
    while prefix_tokens and prefix_tokens[-1] in _ARTICLES:
        prefix_tokens.pop()
    return keyword, " ".join(prefix_tokens)


def extract_position(text: str) -> str:
    """Image-section keyword (left/center/right/top/bottom) in text."""
    found = _find_keyword(text, POSITION_POINTS)
    if found is None:
        raise UnknownDirection(f"no position keyword in {text!r}")
    return found[0]
