"""Deterministic evaluation engine for text-guided image editing."""

from .errors import (
    ArchiveError,
    DatasetError,
    DegenerateDataset,
    DegenerateLatent,
    EmptyBackground,
    EmptyDataset,
    EmptyMask,
    EvaluationFailed,
    MalformedMask,
    PixlensError,
    RunError,
    UnknownColor,
    UnknownDirection,
)
from .model import (
    BBox,
    Detection,
    DetectionSet,
    EditInstruction,
    EditType,
    EvalOutcome,
    SubjectScores,
    validate_instruction,
)
from .rle import decode_rle, encode_rle

__version__ = "0.1.0"

__all__ = [
    "ArchiveError",
    "BBox",
    "DatasetError",
    "DegenerateDataset",
    "DegenerateLatent",
    "Detection",
    "DetectionSet",
    "EditInstruction",
    "EditType",
    "EmptyBackground",
    "EmptyDataset",
    "EmptyMask",
    "EvalOutcome",
    "EvaluationFailed",
    "MalformedMask",
    "PixlensError",
    "RunError",
    "SubjectScores",
    "UnknownColor",
    "UnknownDirection",
    "decode_rle",
    "encode_rle",
    "validate_instruction",
    "__version__",
]
