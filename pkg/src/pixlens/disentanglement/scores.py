"""Intra-sample and inter-sample disentanglement scores."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..errors import DegenerateLatent, EmptyDataset
from .latents import LatentTuple
from .vocabulary import CATEGORY_ORDER, AttributeCategory


def intra_sample_score(t: LatentTuple) -> float:
    """Normalized residual of z_start + z_a2 - z_a1 against z_end.

    Zero means the attribute swap composes linearly; lower is better.
    """
    z_end = np.asarray(t.z_end, dtype=np.float64)
    norm_end = float(np.linalg.norm(z_end))
    if norm_end == 0.0:
        raise DegenerateLatent("z_end has zero norm")
    z_start = np.asarray(t.z_start, dtype=np.float64)
    z_a1 = np.asarray(t.z_a1, dtype=np.float64)
    z_a2 = np.asarray(t.z_a2, dtype=np.float64)
    residual = z_end - (z_start + z_a2 - z_a1)
    return float(np.linalg.norm(residual)) / norm_end


@dataclass(frozen=True)
class IntraSampleReport:
    overall: float
    per_category: dict[str, float]


def intra_sample_report(tuples: list[LatentTuple]) -> IntraSampleReport:
    """Mean intra-sample score per attribute category and overall."""
    if not tuples:
        raise EmptyDataset("no latent tuples to score")
    scores: dict[AttributeCategory, list[float]] = defaultdict(list)
    for t in tuples:
        scores[t.category].append(intra_sample_score(t))
    all_scores = [s for group in scores.values() for s in group]
    per_category = {
        category.value: float(np.mean(scores[category]))
        for category in CATEGORY_ORDER
        if scores[category]
    }
    return IntraSampleReport(overall=float(np.mean(all_scores)), per_category=per_category)


def inter_sample_intra_attribute_score(tuples: list[LatentTuple]) -> float:
    """Mean squared cosine similarity of z_end - z_start across objects.

    All tuples must share one (category, attribute pair); at least two
    objects are required.
    """
    keys = {(t.category, t.a1, t.a2) for t in tuples}
    if len(keys) != 1:
        raise ValueError("tuples must share a single attribute pair")
    if len(tuples) < 2:
        raise ValueError("need at least two objects for an inter-sample score")
    directions = []
    for t in tuples:
        direction = np.asarray(t.z_end, dtype=np.float64) - np.asarray(
            t.z_start, dtype=np.float64
        )
        norm = float(np.linalg.norm(direction))
        if norm == 0.0:
            raise DegenerateLatent(f"zero direction for object {t.object!r}")
        directions.append(direction / norm)
    cosines = [float(np.dot(u, v)) ** 2 for u, v in combinations(directions, 2)]
    return float(np.mean(cosines))


@dataclass(frozen=True)
class InterSampleReport:
    per_category: dict[str, float]
    per_pair: list[dict]
    skipped_pairs: int


def inter_sample_report(tuples: list[LatentTuple]) -> InterSampleReport:
    """Inter-sample scores for every attribute pair, averaged per category."""
    groups: dict[tuple[AttributeCategory, str, str], list[LatentTuple]] = defaultdict(list)
    for t in tuples:
        groups[(t.category, t.a1, t.a2)].append(t)

    per_pair: list[dict] = []
    by_category: dict[AttributeCategory, list[float]] = defaultdict(list)
    skipped = 0
    for key in sorted(groups, key=lambda k: (k[0].value, k[1], k[2])):
        group = groups[key]
        if len(group) < 2:
            skipped += 1
            continue
        try:
            score = inter_sample_intra_attribute_score(group)
        except DegenerateLatent:
            skipped += 1
            continue
        category, a1, a2 = key
        per_pair.append({"category": category.value, "a1": a1, "a2": a2, "score": score})
        by_category[category].append(score)

    per_category = {
        category.value: float(np.mean(by_category[category]))
        for category in CATEGORY_ORDER
        if by_category[category]
    }
    return InterSampleReport(
        per_category=per_category, per_pair=per_pair, skipped_pairs=skipped
    )
