"""Edit dataset ingestion: EditVAL-style nesting and the MagicBrush adapter."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DatasetError
from .model import EditInstruction, EditType, validate_instruction

SOURCES = ("editval", "magicbrush-adapted", "custom")


@dataclass
class EditDataset:
    source: str
    edits: list[EditInstruction] = field(default_factory=list)
    violations: dict[str, list[str]] = field(default_factory=dict)

    def by_image(self) -> dict[str, list[EditInstruction]]:
        grouped: dict[str, list[EditInstruction]] = {}
        for edit in self.edits:
            grouped.setdefault(edit.image_id, []).append(edit)
        return grouped


def _build_instruction(path: Path, edit_id: str, record: dict, category: str, image_id: str):
    try:
        edit_type = EditType.parse(record["edit_type"])
    except KeyError:
        raise DatasetError(f"{path}: edit {edit_id!r} has no edit_type") from None
    except ValueError as exc:
        raise DatasetError(f"{path}: edit {edit_id!r}: {exc}") from None
    return EditInstruction(
        edit_id=edit_id,
        edit_type=edit_type,
        category=str(record.get("category", category)),
        to=str(record.get("to", "")),
        prompt=str(record.get("prompt", "")),
        from_attr=record.get("from"),
        image_id=image_id,
    )


def _load_editval(path: Path, data: dict, source: str) -> EditDataset:
    dataset = EditDataset(source=source)
    seen: set[str] = set()
    for category, images in data.items():
        if not isinstance(images, dict):
            raise DatasetError(f"{path}: expected image map under {category!r}")
        for image_id, records in images.items():
            if not isinstance(records, list):
                raise DatasetError(f"{path}: expected edit list under {category}/{image_id}")
            for index, record in enumerate(records):
                edit_id = str(record.get("edit_id", f"{category}-{image_id}-{index:03d}"))
                if edit_id in seen:
                    raise DatasetError(f"{path}: duplicate edit_id {edit_id!r}")
                seen.add(edit_id)
                instruction = _build_instruction(path, edit_id, record, category, str(image_id))
                dataset.edits.append(instruction)
                problems = validate_instruction(instruction)
                if problems:
                    dataset.violations[edit_id] = problems
    return dataset


def _load_magicbrush(path: Path, data: dict) -> EditDataset:
    dataset = EditDataset(source="magicbrush-adapted")
    edits = data.get("edits")
    if not isinstance(edits, list):
        raise DatasetError(f"{path}: magicbrush-adapted file needs an 'edits' list")
    seen: set[str] = set()
    for index, record in enumerate(edits):
        edit_id = str(record.get("edit_id", f"magicbrush-{index:04d}"))
        if edit_id in seen:
            raise DatasetError(f"{path}: duplicate edit_id {edit_id!r}")
        seen.add(edit_id)
        attributes = record.get("attributes")
        if not isinstance(attributes, dict):
            raise DatasetError(
                f"{path}: edit {edit_id!r} lacks the manually-extracted 'attributes' table"
            )
        merged = {**attributes, "prompt": record.get("prompt", "")}
        instruction = _build_instruction(
            path, edit_id, merged, str(attributes.get("category", "")), str(record.get("image_id", ""))
        )
        dataset.edits.append(instruction)
        problems = validate_instruction(instruction)
        if problems:
            dataset.violations[edit_id] = problems
    return dataset


def load_edit_dataset(path: str | Path, source: str = "editval") -> EditDataset:
    """Parse and validate an edit dataset file.

    Schema violations raise DatasetError naming the file and edit;
    instruction-level problems (missing attributes, unknown direction
    keywords) are returned in EditDataset.violations keyed by edit_id.
    """
    if source not in SOURCES:
        raise ValueError(f"source must be one of {SOURCES}, got {source!r}")
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise DatasetError(f"dataset file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise DatasetError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise DatasetError(f"{path}: top level must be a JSON object")
    if source == "magicbrush-adapted":
        return _load_magicbrush(path, data)
    return _load_editval(path, data, source)
