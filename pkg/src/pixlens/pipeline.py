"""Run orchestration: per-edit evaluation over image and detection archives."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dataset import EditDataset
from .detections import (
    DEFAULT_CONFIDENCE_THRESHOLD,
    DetectionArchive,
    Multiplicity,
    query,
    select,
)
from .directions import extract_direction
from .errors import (
    EmptyBackground,
    EvaluationFailed,
    RunError,
    UnknownColor,
    UnknownDirection,
)
from .evaluators import SizeParams, evaluate_edit
from .images import find_image, load_image
from .metrics.histograms import DEFAULT_SIGMA
from .model import DetectionSet, EditInstruction, EditType
from .preservation import (
    DILATION_PX,
    MSE_NORMALIZER,
    PreservationContext,
    background_preservation,
    subject_preservation,
)
from .report import EvaluationReport, ReportRecord


@dataclass
class RunConfig:
    model: str = "model"
    threshold: float = DEFAULT_CONFIDENCE_THRESHOLD
    size_params: SizeParams = field(default_factory=SizeParams)
    histogram_sigma: float = DEFAULT_SIGMA
    workers: int = 1
    dilation_px: int = DILATION_PX
    mse_normalizer: float = MSE_NORMALIZER

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "threshold": self.threshold,
            "size_delta": self.size_params.delta,
            "containment_threshold": self.size_params.containment_threshold,
            "histogram_sigma": self.histogram_sigma,
            "dilation_px": self.dilation_px,
            "mse_normalizer": self.mse_normalizer,
        }


# Labels whose regions the edit intentionally touches, per edit type;
# used to build the background exclusion mask.
_TO_LABEL_TYPES = {
    EditType.OBJECT_ADDITION,
    EditType.OBJECT_REPLACEMENT,
    EditType.ALTER_PARTS,
}


def _edited_subject_labels(instruction: EditInstruction) -> list[str]:
    labels = [instruction.category]
    if instruction.edit_type in _TO_LABEL_TYPES and instruction.to.strip():
        labels.append(instruction.to)
    if instruction.edit_type is EditType.POSITIONAL_ADDITION:
        try:
            _, to_label = extract_direction(instruction.to)
            if to_label:
                labels.append(to_label)
        except UnknownDirection:
            pass
    return labels


def _input_subject_labels(instruction: EditInstruction) -> list[str]:
    labels = [instruction.category]
    if instruction.edit_type is EditType.OBJECT_REPLACEMENT and instruction.from_attr:
        labels.append(instruction.from_attr)
    return labels


def _collect_masks(
    dset: DetectionSet, labels: list[str], threshold: float
) -> list[np.ndarray]:
    masks = []
    for label in labels:
        masks.extend(det.mask for det in query(dset, label, threshold))
    return masks


def _evaluate_one(
    instruction: EditInstruction,
    violations: list[str],
    images_dir,
    edited_dir,
    input_archive: DetectionArchive,
    edited_archive: DetectionArchive,
    config: RunConfig,
) -> ReportRecord:
    record = ReportRecord(
        edit_id=instruction.edit_id,
        image_id=instruction.image_id,
        edit_type=instruction.edit_type.value,
        edit_specific=0.0,
        evaluation_success=False,
    )
    if violations:
        record.notes.extend(f"invalid instruction: {v}" for v in violations)
        return record

    input_path = find_image(images_dir, instruction.image_id)
    if input_path is None:
        raise RunError(f"{instruction.edit_id}: input image {instruction.image_id!r} missing")
    edited_path = find_image(edited_dir, instruction.edit_id)
    if edited_path is None:
        raise RunError(f"{instruction.edit_id}: edited image missing")
    input_set = input_archive.get(instruction.image_id)
    if input_set is None:
        raise RunError(f"{instruction.edit_id}: no input detections for {instruction.image_id!r}")
    edited_set = edited_archive.get(instruction.edit_id)
    if edited_set is None:
        raise RunError(f"{instruction.edit_id}: no edited detections")

    input_image = load_image(input_path)
    edited_image = load_image(edited_path)

    try:
        result = evaluate_edit(
            instruction,
            input_set,
            edited_set,
            edited_image,
            threshold=config.threshold,
            size_params=config.size_params,
            sigma=config.histogram_sigma,
        )
        record.edit_specific = result.score
        record.evaluation_success = True
        record.notes.extend(result.notes)
    except (EvaluationFailed, UnknownDirection, UnknownColor) as exc:
        record.notes.append(f"evaluation failed: {exc}")

    subject_input = select(
        query(input_set, instruction.category, config.threshold), Multiplicity.LARGEST
    )
    subject_edited = select(
        query(edited_set, instruction.category, config.threshold), Multiplicity.LARGEST
    )
    if subject_input is not None and subject_edited is not None:
        try:
            record.subject = subject_preservation(
                PreservationContext(
                    input_image=input_image,
                    edited_image=edited_image,
                    mask_input=subject_input.mask,
                    mask_edited=subject_edited.mask,
                    edit_type=instruction.edit_type,
                ),
                sigma=config.histogram_sigma,
            )
        except EvaluationFailed as exc:
            record.notes.append(f"subject preservation unavailable: {exc}")
    else:
        record.notes.append("subject preservation unavailable: subject not detected in both images")

    masks = _collect_masks(input_set, _input_subject_labels(instruction), config.threshold)
    masks += _collect_masks(edited_set, _edited_subject_labels(instruction), config.threshold)
    try:
        record.background = background_preservation(
            input_image,
            edited_image,
            masks,
            dilation_px=config.dilation_px,
            normalizer=config.mse_normalizer,
        )
    except EmptyBackground:
        record.notes.append("background preservation unavailable: no background left")
    return record


def run_evaluation(
    dataset: EditDataset,
    images_dir,
    edited_dir,
    input_archive: DetectionArchive,
    edited_archive: DetectionArchive,
    config: RunConfig = RunConfig(),
) -> EvaluationReport:
    """Evaluate every edit; per-edit failures become data, not crashes.

    Output is deterministic and independent of the worker count: results
    are merged in edit_id order.
    """
    edits = sorted(dataset.edits, key=lambda e: e.edit_id)

    def work(instruction: EditInstruction) -> ReportRecord:
        return _evaluate_one(
            instruction,
            dataset.violations.get(instruction.edit_id, []),
            images_dir,
            edited_dir,
            input_archive,
            edited_archive,
            config,
        )

    if config.workers <= 1:
        records = [work(edit) for edit in edits]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(work, edits))

    return EvaluationReport(model=config.model, config=config.to_dict(), records=records)
