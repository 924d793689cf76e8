"""Domain types shared by every module, plus instruction validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .directions import DIRECTION_VECTORS, POSITION_POINTS, _find_keyword
from .errors import EmptyMask


class EditType(str, Enum):
    OBJECT_ADDITION = "object_addition"
    SIZE_CHANGE = "size_change"
    POSITIONAL_ADDITION = "positional_addition"
    POSITION_REPLACEMENT = "position_replacement"
    OBJECT_REPLACEMENT = "object_replacement"
    OBJECT_REMOVAL = "object_removal"
    SINGLE_INSTANCE_REMOVAL = "single_instance_removal"
    ALTER_PARTS = "alter_parts"
    COLOR_CHANGE = "color_change"

    @classmethod
    def parse(cls, value: str) -> "EditType":
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"unknown edit type: {value!r}") from None


# Edit types whose `to` attribute is mandatory.
_REQUIRES_TO = frozenset(EditType) - {
    EditType.OBJECT_REMOVAL,
    EditType.SINGLE_INSTANCE_REMOVAL,
}


def normalize_from(value: str | None) -> str | None:
    """Map the "none" placeholder and empty strings to an absent `from`."""
    if value is None:
        return None
    stripped = value.strip()
    if not stripped or stripped.lower() == "none":
        return None
    return stripped


@dataclass(frozen=True)
class EditInstruction:
    """One edit request parsed from a dataset file."""

    edit_id: str
    edit_type: EditType
    category: str
    to: str
    prompt: str = ""
    from_attr: str | None = None
    image_id: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "from_attr", normalize_from(self.from_attr))


def validate_instruction(inst: EditInstruction) -> list[str]:
    """All violations for an instruction, sorted; empty means valid."""
    violations: set[str] = set()
    if not inst.category.strip():
        violations.add("missing category")
    if inst.edit_type in _REQUIRES_TO and not inst.to.strip():
        violations.add("missing to")
    if inst.edit_type is EditType.OBJECT_REPLACEMENT and inst.from_attr is None:
        violations.add("missing from")
    if inst.edit_type is EditType.POSITIONAL_ADDITION and inst.to.strip():
        if _find_keyword(inst.to, DIRECTION_VECTORS) is None:
            violations.add("unknown direction keyword")
    if inst.edit_type is EditType.POSITION_REPLACEMENT:
        targets = [inst.to if inst.to.strip() else None, inst.from_attr]
        for text in targets:
            if text is None or _find_keyword(text, POSITION_POINTS) is None:
                violations.add("unknown direction keyword")
    return sorted(violations)


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box, origin top-left, inclusive corners."""

    x0: int
    y0: int
    x1: int
    y1: int

    def __post_init__(self) -> None:
        if self.x0 > self.x1 or self.y0 > self.y1:
            raise ValueError(f"degenerate bbox {self.as_list()}")

    def as_list(self) -> list[int]:
        return [self.x0, self.y0, self.x1, self.y1]


def bbox_of_mask(mask: np.ndarray) -> BBox:
    """Tight axis-aligned hull of the true pixels."""
    ys, xs = np.nonzero(mask)
    if ys.size == 0:
        raise EmptyMask("cannot compute the hull of an empty mask")
    return BBox(int(xs.min()), int(ys.min()), int(xs.max()), int(ys.max()))


@dataclass(frozen=True, eq=False)
class Detection:
    """One detected object: label, confidence, tight bbox, binary mask."""

    label: str
    confidence: float
    bbox: BBox
    mask: np.ndarray

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")
        self.mask.setflags(write=False)

    @classmethod
    def from_mask(cls, label: str, confidence: float, mask: np.ndarray) -> "Detection":
        """Build a detection whose bbox is the tight hull of the mask."""
        mask = np.asarray(mask, dtype=bool)
        return cls(label=label, confidence=confidence, bbox=bbox_of_mask(mask), mask=mask)

    @property
    def area(self) -> int:
        return int(self.mask.sum())


@dataclass(frozen=True, eq=False)
class DetectionSet:
    """All detections for one image."""

    image_id: str
    width: int
    height: int
    detections: tuple[Detection, ...] = ()

    def __post_init__(self) -> None:
        for det in self.detections:
            if det.mask.shape != (self.height, self.width):
                raise ValueError(
                    f"mask shape {det.mask.shape} does not match image "
                    f"{self.width}x{self.height} for label {det.label!r}"
                )


@dataclass(frozen=True)
class SubjectScores:
    """The subject-preservation bundle.

    color_similarity is None for color edits, where it is meaningless.
    """

    sift: float
    aligned_iou: float
    ssim: float
    position: float
    color_similarity: float | None = None

    def to_dict(self) -> dict:
        return {
            "sift": self.sift,
            "aligned_iou": self.aligned_iou,
            "ssim": self.ssim,
            "color_similarity": self.color_similarity,
            "position": self.position,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SubjectScores":
        return cls(
            sift=data["sift"],
            aligned_iou=data["aligned_iou"],
            ssim=data["ssim"],
            position=data["position"],
            color_similarity=data.get("color_similarity"),
        )


@dataclass
class EvalOutcome:
    """Result of evaluating one edit."""

    edit_id: str
    edit_specific: float
    evaluation_success: bool
    subject: SubjectScores | None = None
    background: float | None = None
    notes: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not 0.0 <= self.edit_specific <= 1.0:
            raise ValueError(f"edit_specific {self.edit_specific} outside [0, 1]")

    def to_dict(self) -> dict:
        return {
            "edit_id": self.edit_id,
            "edit_specific": self.edit_specific,
            "evaluation_success": self.evaluation_success,
            "subject": self.subject.to_dict() if self.subject else None,
            "background": self.background,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EvalOutcome":
        subject = data.get("subject")
        return cls(
            edit_id=data["edit_id"],
            edit_specific=data["edit_specific"],
            evaluation_success=data["evaluation_success"],
            subject=SubjectScores.from_dict(subject) if subject else None,
            background=data.get("background"),
            notes=list(data.get("notes", [])),
        )
