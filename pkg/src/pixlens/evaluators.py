"""The nine edit-specific evaluators mapping detections to scores in [0, 1]."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .detections import DEFAULT_CONFIDENCE_THRESHOLD, Multiplicity, count_instances, query, select
from .directions import POSITION_POINTS, direction_unit_vector, extract_direction, extract_position
from .errors import EvaluationFailed, UnknownColor, UnknownDirection
from .metrics.histograms import DEFAULT_SIGMA, histogram_correlation, masked_histograms
from .metrics.masks import intersection_area, mask_area, mask_centroid
from .model import Detection, DetectionSet, EditInstruction, EditType

# Fraction of the image diagonal below which a movement vector counts as
# "did not move".
NEGLIGIBLE_FRACTION = 0.01

# Named colors for the color-change evaluator (CSS values). The check is
# biased toward pure basic colors by construction.
COLOR_TABLE: dict[str, tuple[int, int, int]] = {
    "black": (0, 0, 0),
    "white": (255, 255, 255),
    "red": (255, 0, 0),
    "green": (0, 128, 0),
    "blue": (0, 0, 255),
    "yellow": (255, 255, 0),
    "orange": (255, 165, 0),
    "purple": (128, 0, 128),
    "pink": (255, 192, 203),
    "brown": (165, 42, 42),
    "gray": (128, 128, 128),
    "cyan": (0, 255, 255),
    "magenta": (255, 0, 255),
    "gold": (255, 215, 0),
    "silver": (192, 192, 192),
    "beige": (245, 245, 220),
}

_SIZE_KEYWORDS = {
    "small": "small",
    "smaller": "small",
    "tiny": "small",
    "shrink": "small",
    "big": "big",
    "bigger": "big",
    "large": "big",
    "larger": "big",
    "huge": "big",
}


@dataclass(frozen=True)
class SizeParams:
    """Thresholds for the size-change evaluator."""

    delta: float = 0.1
    containment_threshold: float = 0.9

    def __post_init__(self) -> None:
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if not 0 < self.containment_threshold <= 1:
            raise ValueError("containment threshold must lie in (0, 1]")


@dataclass
class EvalResult:
    score: float
    notes: list[str] = field(default_factory=list)


def normalize_size_keyword(text: str) -> str:
    """Map size phrasing ("larger", "tiny") onto {small, big}."""
    for token in re.findall(r"[a-z]+", text.lower()):
        if token in _SIZE_KEYWORDS:
            return _SIZE_KEYWORDS[token]
    raise ValueError(f"no size keyword in {text!r}")


def directional_score(direction: np.ndarray, reference: np.ndarray) -> float:
    """max(0, (90 - alpha) / 90) for the angle alpha between the vectors."""
    norm_d = float(np.linalg.norm(direction))
    norm_r = float(np.linalg.norm(reference))
    if norm_d == 0.0 or norm_r == 0.0:
        return 0.0
    cosine = float(np.dot(direction, reference)) / (norm_d * norm_r)
    alpha = math.degrees(math.acos(max(-1.0, min(1.0, cosine))))
    return max(0.0, (90.0 - alpha) / 90.0)


def _math_frame(pixel_vector: tuple[float, float]) -> np.ndarray:
    """Pixel displacement -> y-up frame (rows grow downward)."""
    return np.array([pixel_vector[0], -pixel_vector[1]])


def _largest(dset: DetectionSet, label: str, threshold: float) -> Detection | None:
    return select(query(dset, label, threshold), Multiplicity.LARGEST)


def eval_object_addition(
    edited: DetectionSet, to_label: str, threshold: float = DEFAULT_CONFIDENCE_THRESHOLD
) -> EvalResult:
    """1.0 if the added object exists in the edited image, else 0.0.

    The original category is deliberately not required; its retention is
    the subject-preservation check's job.
    """
    matches = query(edited, to_label, threshold)
    notes = []
    if len(matches) > 1:
        notes.append(f"multiplicity: {len(matches)} instances of {to_label!r} detected")
    return EvalResult(1.0 if matches else 0.0, notes)


def eval_size_change(
    input_set: DetectionSet,
    edited: DetectionSet,
    category: str,
    to: str,
    params: SizeParams = SizeParams(),
    threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
) -> EvalResult:
    """Area-ratio gate plus containment check for resize edits."""
    try:
        direction = normalize_size_keyword(to)
    except ValueError as exc:
        raise EvaluationFailed(str(exc)) from None
    det0 = _largest(input_set, category, threshold)
    det1 = _largest(edited, category, threshold)
    if det0 is None or det1 is None:
        raise EvaluationFailed(f"category {category!r} not detected in both images")

    ratio = det1.area / det0.area
    if direction == "small" and ratio >= 1.0 - params.delta:
        return EvalResult(0.0, [f"area ratio {ratio:.4f} did not shrink below {1 - params.delta}"])
    if direction == "big" and ratio <= 1.0 + params.delta:
        return EvalResult(0.0, [f"area ratio {ratio:.4f} did not grow above {1 + params.delta}"])

    smaller_area = min(det0.area, det1.area)
    containment = intersection_area(det0.mask, det1.mask) / smaller_area
    if containment > params.containment_threshold:
        return EvalResult(1.0)
    return EvalResult(
        0.0, [f"containment {containment:.4f} at or below {params.containment_threshold}"]
    )


def eval_positional_addition(
    input_set: DetectionSet,
    edited: DetectionSet,
    category: str,
    to: str,
    threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
) -> EvalResult:
    """Angle between the realized and requested placement directions."""
    keyword, to_label = extract_direction(to)
    if not to_label:
        raise UnknownDirection(f"no object label ahead of the direction in {to!r}")
    anchor = _largest(input_set, category, threshold)
    if anchor is None:
        raise EvaluationFailed(f"category {category!r} not detected in the input image")
    added = _largest(edited, to_label, threshold)
    if added is None:
        return EvalResult(0.0, [f"{to_label!r} not detected in the edited image"])

    cm_anchor = mask_centroid(anchor.mask)
    cm_added = mask_centroid(added.mask)
    movement = _math_frame((cm_added[0] - cm_anchor[0], cm_added[1] - cm_anchor[1]))
    diagonal = math.hypot(input_set.width, input_set.height)
    if float(np.linalg.norm(movement)) < NEGLIGIBLE_FRACTION * diagonal:
        return EvalResult(0.0, ["object added at the anchor position"])
    return EvalResult(directional_score(movement, direction_unit_vector(keyword)))


def _section_bounds(index: int, extent: int) -> tuple[float, float]:
    return index * extent / 3.0, (index + 1) * extent / 3.0


def _in_section(
    centroid: tuple[float, float], keyword: str, axis_hint: str, width: int, height: int
) -> bool:
    horizontal = {"left": 0, "center": 1, "right": 2}
    vertical = {"top": 0, "center": 1, "bottom": 2}
    if keyword in ("left", "right") or (keyword == "center" and axis_hint in horizontal):
        low, high = _section_bounds(horizontal[keyword], width)
        value = centroid[0]
    else:
        low, high = _section_bounds(vertical[keyword], height)
        value = centroid[1]
    # Centroids never reach the far image edge, so [low, high) is total.
    return low <= value < high


def eval_position_replacement(
    input_set: DetectionSet,
    edited: DetectionSet,
    category: str,
    init_pos: str,
    intended_pos: str,
    threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
) -> EvalResult:
    """Blend of movement-direction score and final-section check."""
    init_kw = extract_position(init_pos)
    intended_kw = extract_position(intended_pos)
    det0 = _largest(input_set, category, threshold)
    if det0 is None:
        raise EvaluationFailed(f"category {category!r} not detected in the input image")
    det1 = _largest(edited, category, threshold)
    if det1 is None:
        return EvalResult(0.0, [f"category {category!r} not detected in the edited image"])

    reference = np.array(POSITION_POINTS[intended_kw]) - np.array(POSITION_POINTS[init_kw])
    if float(np.linalg.norm(reference)) == 0.0:
        return EvalResult(0.0, [f"positions {init_kw!r} -> {intended_kw!r} define no direction"])

    cm0 = mask_centroid(det0.mask)
    cm1 = mask_centroid(det1.mask)
    movement = _math_frame((cm1[0] - cm0[0], cm1[1] - cm0[1]))
    diagonal = math.hypot(input_set.width, input_set.height)
    if float(np.linalg.norm(movement)) < NEGLIGIBLE_FRACTION * diagonal:
        relative = 0.0
    else:
        relative = directional_score(movement, reference)
    if relative <= 0.0:
        return EvalResult(0.0, ["movement direction opposes the requested one"])

    absolute = (
        1.0 if _in_section(cm1, intended_kw, init_kw, edited.width, edited.height) else 0.0
    )
    return EvalResult((relative + absolute) / 2.0)


def eval_object_replacement(
    input_set: DetectionSet,
    edited: DetectionSet,
    from_label: str,
    to_label: str,
    threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
) -> EvalResult:
    """1.0 when the replacement overlaps the replaced object's mask."""
    original = _largest(input_set, from_label, threshold)
    if original is None:
        raise EvaluationFailed(f"{from_label!r} not detected in the input image")
    replacement = select(
        query(edited, to_label, threshold),
        Multiplicity.CLOSEST,
        reference=mask_centroid(original.mask),
    )
    if replacement is None:
        return EvalResult(0.0, [f"{to_label!r} not detected in the edited image"])
    if intersection_area(original.mask, replacement.mask) > 0:
        return EvalResult(1.0)
    return EvalResult(0.0, ["replacement does not overlap the original object"])


def eval_object_removal(
    input_set: DetectionSet,
    edited: DetectionSet,
    category: str,
    threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
) -> EvalResult:
    """max(1 - edited_count / input_count, 0)."""
    num_input = count_instances(input_set, category, threshold)
    if num_input == 0:
        raise EvaluationFailed(f"no {category!r} instances in the input image")
    num_edited = count_instances(edited, category, threshold)
    return EvalResult(max(1.0 - num_edited / num_input, 0.0))


def eval_single_instance_removal(
    input_set: DetectionSet,
    edited: DetectionSet,
    category: str,
    threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
) -> EvalResult:
    """1.0 exactly when the instance count drops by one."""
    num_input = count_instances(input_set, category, threshold)
    if num_input == 0:
        raise EvaluationFailed(f"no {category!r} instances in the input image")
    num_edited = count_instances(edited, category, threshold)
    if num_edited == num_input - 1:
        return EvalResult(1.0)
    return EvalResult(0.0, [f"instance count went {num_input} -> {num_edited}"])


def eval_alter_parts(
    input_set: DetectionSet,
    edited: DetectionSet,
    category: str,
    to_label: str,
    threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
) -> EvalResult:
    """Fraction of category instances touched by their nearest complement."""
    instances = query(input_set, category, threshold)
    if not instances:
        raise EvaluationFailed(f"no {category!r} instances in the input image")
    complements = query(edited, to_label, threshold)
    if not complements:
        return EvalResult(0.0, [f"{to_label!r} not detected in the edited image"])

    touched = 0
    for instance in instances:
        nearest = select(
            complements, Multiplicity.CLOSEST, reference=mask_centroid(instance.mask)
        )
        if nearest is not None and intersection_area(instance.mask, nearest.mask) > 0:
            touched += 1
    return EvalResult(touched / len(instances))


def target_color(name: str) -> tuple[int, int, int]:
    key = " ".join(name.lower().split())
    try:
        return COLOR_TABLE[key]
    except KeyError:
        raise UnknownColor(f"{name!r} is not in the named-color table") from None


def eval_color_change(
    edited_image: np.ndarray,
    edited: DetectionSet,
    category: str,
    to_color_name: str,
    threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
    sigma: float = DEFAULT_SIGMA,
) -> EvalResult:
    """Histogram correlation between the subject and a flat target color."""
    rgb = target_color(to_color_name)
    det = _largest(edited, category, threshold)
    if det is None:
        raise EvaluationFailed(f"category {category!r} not detected in the edited image")

    subject_hists = masked_histograms(edited_image, det.mask, sigma)
    target_image = np.empty_like(edited_image)
    target_image[:] = np.array(rgb, dtype=float) / 255.0
    target_hists = masked_histograms(
        target_image, np.ones(edited_image.shape[:2], dtype=bool), sigma
    )
    raw = histogram_correlation(subject_hists, target_hists)
    return EvalResult(min(max(raw, 0.0), 1.0), [f"raw correlation {raw:.6f}"])


def evaluate_edit(
    instruction: EditInstruction,
    input_set: DetectionSet,
    edited_set: DetectionSet,
    edited_image: np.ndarray | None,
    threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
    size_params: SizeParams = SizeParams(),
    sigma: float = DEFAULT_SIGMA,
) -> EvalResult:
    """Dispatch one instruction to its edit-type evaluator."""
    kind = instruction.edit_type
    if kind is EditType.OBJECT_ADDITION:
        return eval_object_addition(edited_set, instruction.to, threshold)
    if kind is EditType.SIZE_CHANGE:
        return eval_size_change(
            input_set, edited_set, instruction.category, instruction.to, size_params, threshold
        )
    if kind is EditType.POSITIONAL_ADDITION:
        return eval_positional_addition(
            input_set, edited_set, instruction.category, instruction.to, threshold
        )
    if kind is EditType.POSITION_REPLACEMENT:
        if instruction.from_attr is None:
            raise UnknownDirection("position replacement without an initial position")
        return eval_position_replacement(
            input_set,
            edited_set,
            instruction.category,
            instruction.from_attr,
            instruction.to,
            threshold,
        )
    if kind is EditType.OBJECT_REPLACEMENT:
        if instruction.from_attr is None:
            raise EvaluationFailed("object replacement without a from attribute")
        return eval_object_replacement(
            input_set, edited_set, instruction.from_attr, instruction.to, threshold
        )
    if kind is EditType.OBJECT_REMOVAL:
        return eval_object_removal(input_set, edited_set, instruction.category, threshold)
    if kind is EditType.SINGLE_INSTANCE_REMOVAL:
        return eval_single_instance_removal(
            input_set, edited_set, instruction.category, threshold
        )
    if kind is EditType.ALTER_PARTS:
        return eval_alter_parts(
            input_set, edited_set, instruction.category, instruction.to, threshold
        )
    if kind is EditType.COLOR_CHANGE:
        if edited_image is None:
            raise EvaluationFailed("color change needs the edited image pixels")
        return eval_color_change(
            edited_image, edited_set, instruction.category, instruction.to, threshold, sigma
        )
    raise ValueError(f"no evaluator for {kind}")
