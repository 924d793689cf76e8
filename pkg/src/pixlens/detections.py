"""Detection archives, label/confidence queries, and multiplicity handlers."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import ArchiveError, MalformedMask
from .metrics.masks import mask_centroid
from .model import Detection, DetectionSet
from .rle import decode_rle, encode_rle

DEFAULT_CONFIDENCE_THRESHOLD = 0.1

MANIFEST_NAME = "manifest.json"


class Multiplicity(str, Enum):
    """Rule for picking one detection when several instances match."""

    LARGEST = "largest"
    CLOSEST = "closest"
    ALL = "all"


def normalize_label(label: str) -> str:
    return " ".join(label.lower().split())


def _order_key(det: Detection) -> tuple:
    # Descending confidence, then descending area, then bbox position.
    return (-det.confidence, -det.area, det.bbox.x0, det.bbox.y0, det.bbox.x1, det.bbox.y1)


def query(dset: DetectionSet, label: str, threshold: float) -> list[Detection]:
    """Detections matching the label at or above the confidence threshold.

    Label matching is exact after case and whitespace normalization.
    Result order is deterministic: confidence desc, area desc, bbox asc.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold {threshold} outside [0, 1]")
    wanted = normalize_label(label)
    matches = [
        det
        for det in dset.detections
        if normalize_label(det.label) == wanted and det.confidence >= threshold
    ]
    return sorted(matches, key=_order_key)


def count_instances(dset: DetectionSet, label: str, threshold: float) -> int:
    """Number of detections query() would return."""
    return len(query(dset, label, threshold))


def select(
    detections: list[Detection],
    policy: Multiplicity,
    reference: tuple[float, float] | None = None,
) -> Detection | None:
    """Resolve multiplicity: pick one detection, or None if the list is empty.

    LARGEST prefers area, then confidence, then bbox position. CLOSEST
    prefers the smallest centroid distance to the reference point, then
    the largest area.
    """
    if not detections:
        return None
    if policy is Multiplicity.LARGEST:
        return min(
            detections,
            key=lambda d: (-d.area, -d.confidence, d.bbox.x0, d.bbox.y0, d.bbox.x1, d.bbox.y1),
        )
    if policy is Multiplicity.CLOSEST:
        if reference is None:
            raise ValueError("CLOSEST needs a reference point")
        height, width = detections[0].mask.shape
        if not (0 <= reference[0] < width and 0 <= reference[1] < height):
            raise ValueError(f"reference {reference} outside image bounds {width}x{height}")

        def distance(det: Detection) -> float:
            cx, cy = mask_centroid(det.mask)
            return math.hypot(cx - reference[0], cy - reference[1])

        return min(
            detections,
            key=lambda d: (distance(d), -d.area, d.bbox.x0, d.bbox.y0, d.bbox.x1, d.bbox.y1),
        )
    raise ValueError(f"select() cannot resolve policy {policy}; ALL is caller-handled")


@dataclass
class DetectionArchive:
    """Read-only collection of per-image detection sets."""

    detector: str
    threshold: float
    images: dict[str, DetectionSet]
    notes: list[str] = field(default_factory=list)

    def get(self, image_id: str) -> DetectionSet | None:
        return self.images.get(image_id)


def load_archive(path: str | Path) -> DetectionArchive:
    """Load and validate a detection archive directory.

    The directory must contain manifest.json (see FORMATS.md). Bounding
    boxes in the manifest are advisory; each detection's bbox is
    recomputed as the tight hull of its decoded mask. Detections whose
    mask decodes to all-false are dropped with a note.
    """
    root = Path(path)
    manifest_path = root / MANIFEST_NAME
    if not manifest_path.is_file():
        raise ArchiveError(f"missing {MANIFEST_NAME} in {root}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ArchiveError(f"unreadable manifest in {root}: {exc}") from exc

    records = manifest.get("images")
    if not isinstance(records, list):
        raise ArchiveError(f"manifest in {root} has no 'images' list")

    images: dict[str, DetectionSet] = {}
    notes = [str(err) for err in manifest.get("errors", [])]
    for record in records:
        try:
            image_id = record["image_id"]
            width = int(record["width"])
            height = int(record["height"])
            raw_detections = record.get("detections", [])
        except (KeyError, TypeError) as exc:
            raise ArchiveError(f"malformed image record in {root}: {exc}") from exc
        if image_id in images:
            raise ArchiveError(f"duplicate image_id {image_id!r} in {root}")

        detections = []
        for det in raw_detections:
            try:
                mask = decode_rle(det["rle"], width, height)
            except MalformedMask as exc:
                raise MalformedMask(f"{image_id}: {exc}") from exc
            if not mask.any():
                notes.append(f"{image_id}: dropped empty-mask detection {det['label']!r}")
                continue
            detections.append(
                Detection.from_mask(
                    label=str(det["label"]),
                    confidence=float(det["confidence"]),
                    mask=mask,
                )
            )
        images[image_id] = DetectionSet(
            image_id=image_id, width=width, height=height, detections=tuple(detections)
        )

    return DetectionArchive(
        detector=str(manifest.get("detector", "unknown")),
        threshold=float(manifest.get("threshold", DEFAULT_CONFIDENCE_THRESHOLD)),
        images=images,
        notes=notes,
    )


def write_archive(archive: DetectionArchive, path: str | Path) -> None:
    """Write an archive directory in the documented manifest layout."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    records = []
    for image_id in sorted(archive.images):
        dset = archive.images[image_id]
        records.append(
            {
                "image_id": image_id,
                "image": f"{image_id}.png",
                "width": dset.width,
                "height": dset.height,
                "detections": [
                    {
                        "label": det.label,
                        "confidence": round(det.confidence, 6),
                        "bbox": det.bbox.as_list(),
                        "rle": encode_rle(det.mask),
                    }
                    for det in dset.detections
                ],
            }
        )
    manifest = {
        "detector": archive.detector,
        "threshold": archive.threshold,
        "images": records,
    }
    (root / MANIFEST_NAME).write_text(
        json.dumps(manifest, indent=2, sort_keys=True), encoding="utf-8"
    )


def detection_set_from_masks(
    image_id: str,
    width: int,
    height: int,
    entries: list[tuple[str, float, np.ndarray]],
) -> DetectionSet:
    """Convenience constructor used by fixtures and adapters."""
    detections = tuple(
        Detection.from_mask(label, confidence, mask) for label, confidence, mask in entries
    )
    return DetectionSet(image_id=image_id, width=width, height=height, detections=detections)
