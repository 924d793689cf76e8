"""Latent archive IO and tuple assembly for the disentanglement scores."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from ..errors import ArchiveError
from .vocabulary import ATTRIBUTES, CATEGORY_ORDER, OBJECTS, AttributeCategory, attribute_prompt

MANIFEST_NAME = "manifest.json"


@dataclass(frozen=True)
class LatentEntry:
    prompt: str
    vector: np.ndarray
    attribute: str | None = None
    object: str | None = None
    categories: tuple[str, ...] = ()


@dataclass
class LatentArchive:
    """Latents keyed by prompt, with optional category disambiguation."""

    dim: int
    entries: list[LatentEntry]
    metadata: dict = field(default_factory=dict)
    _index: dict[str, list[LatentEntry]] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        for entry in self.entries:
            self._index.setdefault(entry.prompt, []).append(entry)

    def get(self, prompt: str, category: str | None = None) -> np.ndarray | None:
        candidates = self._index.get(prompt)
        if not candidates:
            return None
        if category is not None:
            for entry in candidates:
                if category in entry.categories:
                    return entry.vector
        return candidates[0].vector


def load_latent_archive(path: str | Path) -> LatentArchive:
    """Load a latent archive directory: manifest plus raw float32 files."""
    root = Path(path)
    manifest_path = root / MANIFEST_NAME
    if not manifest_path.is_file():
        raise ArchiveError(f"missing {MANIFEST_NAME} in {root}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ArchiveError(f"unreadable manifest in {root}: {exc}") from exc

    dim = manifest.get("dim")
    if not isinstance(dim, int) or dim <= 0:
        raise ArchiveError(f"manifest in {root} lacks a positive 'dim'")
    raw_entries = manifest.get("entries")
    if not isinstance(raw_entries, list):
        raise ArchiveError(f"manifest in {root} has no 'entries' list")

    entries = []
    for record in raw_entries:
        try:
            prompt = record["prompt"]
            rel_path = record["path"]
        except (KeyError, TypeError) as exc:
            raise ArchiveError(f"malformed latent entry in {root}: {exc}") from exc
        file_path = root / rel_path
        if not file_path.is_file():
            raise ArchiveError(f"latent file missing: {file_path}")
        vector = np.fromfile(file_path, dtype="<f4")
        if vector.size != dim:
            raise ArchiveError(
                f"{file_path} holds {vector.size} floats, manifest dim is {dim}"
            )
        if not np.all(np.isfinite(vector)):
            raise ArchiveError(f"non-finite values in {file_path}")
        categories: tuple[str, ...]
        if record.get("categories"):
            categories = tuple(record["categories"])
        elif record.get("category"):
            categories = (record["category"],)
        else:
            categories = ()
        vector.setflags(write=False)
        entries.append(
            LatentEntry(
                prompt=prompt,
                vector=vector,
                attribute=record.get("attribute"),
                object=record.get("object"),
                categories=categories,
            )
        )
    metadata = {k: v for k, v in manifest.items() if k not in ("entries",)}
    return LatentArchive(dim=dim, entries=entries, metadata=metadata)


@dataclass(frozen=True)
class LatentTuple:
    """(z_start, z_a1, z_a2, z_end) with its provenance."""

    z_start: np.ndarray
    z_a1: np.ndarray
    z_a2: np.ndarray
    z_end: np.ndarray
    object: str
    a1: str
    a2: str
    category: AttributeCategory

    def __post_init__(self) -> None:
        if self.a1 == self.a2:
            raise ValueError("attribute pair must be distinct")


def build_tuples(archive: LatentArchive) -> tuple[list[LatentTuple], int]:
    """All (category, attribute pair, object) tuples the archive covers.

    Returns the tuples and the number of combinations skipped for
    missing latents.
    """
    tuples: list[LatentTuple] = []
    skipped = 0
    for category in CATEGORY_ORDER:
        for a1, a2 in combinations(ATTRIBUTES[category], 2):
            z_a1 = archive.get(attribute_prompt(a1), category.value)
            z_a2 = archive.get(attribute_prompt(a2), category.value)
            for obj in OBJECTS:
                z_start = archive.get(attribute_prompt(a1, obj), category.value)
                z_end = archive.get(attribute_prompt(a2, obj), category.value)
                if any(z is None for z in (z_a1, z_a2, z_start, z_end)):
                    skipped += 1
                    continue
                tuples.append(
                    LatentTuple(
                        z_start=z_start,
                        z_a1=z_a1,
                        z_a2=z_a2,
                        z_end=z_end,
                        object=obj,
                        a1=a1,
                        a2=a2,
                        category=category,
                    )
                )
    return tuples, skipped


def collect_attribute_object_latents(
    archive: LatentArchive,
) -> dict[tuple[AttributeCategory, str, str], np.ndarray]:
    """(category, attribute, object) -> latent, for the Z-diff dataset."""
    latents = {}
    for category in CATEGORY_ORDER:
        for attribute in ATTRIBUTES[category]:
            for obj in OBJECTS:
                vector = archive.get(attribute_prompt(attribute, obj), category.value)
                if vector is not None:
                    latents[(category, attribute, obj)] = vector
    return latents
