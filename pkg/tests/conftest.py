"""Shared builders: masks, textures, archives, and the 6-edit run fixture."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pytest
from scipy import ndimage

from pixlens.detections import DetectionArchive, detection_set_from_masks, write_archive
from pixlens.disentanglement.vocabulary import ATTRIBUTES, CATEGORY_ORDER, OBJECTS
from pixlens.images import save_image


def rect_mask(shape: tuple[int, int], y0: int, y1: int, x0: int, x1: int) -> np.ndarray:
    """Rectangle of true pixels covering rows [y0, y1) and cols [x0, x1)."""
    mask = np.zeros(shape, dtype=bool)
    mask[y0:y1, x0:x1] = True
    return mask


def smooth_texture(seed: int, shape: tuple[int, int] = (64, 64), sigma: float = 2.0) -> np.ndarray:
    """Seeded band-limited noise normalized to [0, 1]."""
    rng = np.random.default_rng(seed)
    tex = ndimage.gaussian_filter(rng.random(shape), sigma)
    return (tex - tex.min()) / (tex.max() - tex.min())


def textured_rgb(seed: int, shape: tuple[int, int] = (64, 64)) -> np.ndarray:
    """Three decorrelated texture channels, quantized to the 8-bit grid."""
    channels = [smooth_texture(seed + offset, shape) for offset in range(3)]
    img = np.stack(channels, axis=-1)
    return np.round(img * 255.0) / 255.0


def paint(image: np.ndarray, mask: np.ndarray, color: tuple[float, float, float],
          texture_weight: float = 0.3) -> np.ndarray:
    """Blend a flat color over the masked region, keeping some texture."""
    out = image.copy()
    blended = (1 - texture_weight) * np.array(color) + texture_weight * image[mask]
    out[mask] = np.round(blended * 255.0) / 255.0
    return out


def write_latent_archive(
    root: Path,
    entries: list[dict],
    vectors: dict[str, np.ndarray],
    dim: int,
    metadata: dict | None = None,
) -> None:
    """entries reference vector keys via 'key'; files are written as <key>.f32."""
    root.mkdir(parents=True, exist_ok=True)
    manifest_entries = []
    for entry in entries:
        key = entry["key"]
        rel = f"{key}.f32"
        vectors[key].astype("<f4").tofile(root / rel)
        manifest_entries.append({k: v for k, v in entry.items() if k != "key"} | {"path": rel})
    manifest = {"dim": dim, **(metadata or {}), "entries": manifest_entries}
    (root / "manifest.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")


BLOCK_WIDTH = 8
BLOCK_DIM = BLOCK_WIDTH * (len(CATEGORY_ORDER) + 1)


def build_block_archive(root: Path, seed: int = 7) -> None:
    """Block-disentangled synthetic latents, written as an on-disk archive.

    Each attribute category owns one coordinate block; a fifth block is
    object identity. Bare prompts use fixed defaults outside their own
    block, combined prompts use object-specific values, so attribute
    swaps compose exactly and shared-attribute differences are silent in
    the category's block.
    """
    rng = np.random.default_rng(seed)
    blocks = {c: slice(i * BLOCK_WIDTH, (i + 1) * BLOCK_WIDTH) for i, c in enumerate(CATEGORY_ORDER)}
    object_block = slice(len(CATEGORY_ORDER) * BLOCK_WIDTH, BLOCK_DIM)

    defaults = {c: rng.normal(size=BLOCK_WIDTH) for c in CATEGORY_ORDER}
    default_obj = rng.normal(size=BLOCK_WIDTH)
    attr_values = {
        (c, a): rng.normal(size=BLOCK_WIDTH) * 3.0
        for c in CATEGORY_ORDER
        for a in ATTRIBUTES[c]
    }
    object_values = {o: rng.normal(size=BLOCK_WIDTH) * 2.0 for o in OBJECTS}
    object_defaults = {
        (c, o): rng.normal(size=BLOCK_WIDTH)
        for c in CATEGORY_ORDER
        for o in OBJECTS
    }

    def assemble(category, attribute, obj=None) -> np.ndarray:
        vec = np.empty(BLOCK_DIM)
        for other in CATEGORY_ORDER:
            if other is category:
                vec[blocks[other]] = attr_values[(category, attribute)]
            elif obj is None:
                vec[blocks[other]] = defaults[other]
            else:
                vec[blocks[other]] = object_defaults[(other, obj)]
        vec[object_block] = default_obj if obj is None else object_values[obj]
        return vec.astype(np.float32)

    entries = []
    vectors = {}
    for category in CATEGORY_ORDER:
        for attribute in ATTRIBUTES[category]:
            slug = attribute.replace(" ", "_")
            key = f"{category.value}_{slug}_bare"
            vectors[key] = assemble(category, attribute)
            entries.append(
                {
                    "key": key,
                    "prompt": attribute,
                    "attribute": attribute,
                    "object": None,
                    "category": category.value,
                }
            )
            for obj in OBJECTS:
                key = f"{category.value}_{slug}_{obj}"
                vectors[key] = assemble(category, attribute, obj)
                entries.append(
                    {
                        "key": key,
                        "prompt": f"{attribute} {obj}",
                        "attribute": attribute,
                        "object": obj,
                        "category": category.value,
                    }
                )
    write_latent_archive(root, entries, vectors, BLOCK_DIM, {"editor": "synthetic-blocks"})


@pytest.fixture(scope="session")
def block_archive_dir(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("latents") / "blocks"
    build_block_archive(root)
    return root


@dataclass
class PipelineFixture:
    edits_path: Path
    images_dir: Path
    edited_dir: Path
    det_input_dir: Path
    det_edited_dir: Path
    # Exact expected edit-specific scores (color asserted separately).
    expected: dict[str, float]


def _build_pipeline_fixture(root: Path) -> PipelineFixture:
    shape = (64, 64)
    images_dir = root / "images"
    edited_dir = root / "edited"
    for directory in (images_dir, edited_dir):
        directory.mkdir(parents=True)

    input_sets = {}
    edited_sets = {}

    def build(image_id, edit_id, seed, input_entries, edited_entries, input_paint, edited_paint):
        base = textured_rgb(seed, shape)
        img_in = base
        for mask, color in input_paint:
            img_in = paint(img_in, mask, color)
        img_out = img_in
        for mask, color in edited_paint:
            img_out = paint(img_out, mask, color)
        save_image(img_in, images_dir / f"{image_id}.png")
        save_image(img_out, edited_dir / f"{edit_id}.png")
        input_sets[image_id] = detection_set_from_masks(image_id, 64, 64, input_entries)
        edited_sets[edit_id] = detection_set_from_masks(edit_id, 64, 64, edited_entries)

    dog = rect_mask(shape, 10, 34, 10, 34)
    ball = rect_mask(shape, 40, 52, 40, 52)
    build(
        "img-add", "e-add", 100,
        [("dog", 0.9, dog)],
        [("dog", 0.9, dog), ("ball", 0.8, ball)],
        [(dog, (0.3, 0.4, 0.7))],
        [(ball, (0.9, 0.4, 0.1))],
    )

    sign_small = rect_mask(shape, 22, 42, 22, 42)
    sign_big = rect_mask(shape, 18, 46, 18, 46)
    build(
        "img-size", "e-size", 101,
        [("sign", 0.9, sign_small)],
        [("sign", 0.9, sign_big)],
        [(sign_small, (0.8, 0.1, 0.1))],
        [(sign_big, (0.8, 0.1, 0.1))],
    )

    cup_a = rect_mask(shape, 8, 24, 8, 24)
    cup_b = rect_mask(shape, 8, 24, 40, 56)
    build(
        "img-remove", "e-remove", 102,
        [("cup", 0.9, cup_a), ("cup", 0.85, cup_b)],
        [("cup", 0.9, cup_a)],
        [(cup_a, (0.2, 0.7, 0.3)), (cup_b, (0.2, 0.7, 0.3))],
        [(cup_b, (0.5, 0.5, 0.5))],
    )

    bench = rect_mask(shape, 44, 60, 4, 60)
    cat = rect_mask(shape, 24, 42, 10, 28)
    hat = rect_mask(shape, 22, 40, 12, 30)
    build(
        "img-replace", "e-replace", 103,
        [("bench", 0.9, bench), ("cat", 0.9, cat)],
        [("bench", 0.9, bench), ("hat", 0.85, hat)],
        [(bench, (0.4, 0.3, 0.2)), (cat, (0.6, 0.6, 0.6))],
        [(hat, (0.1, 0.1, 0.6))],
    )

    pizza_a = rect_mask(shape, 10, 28, 6, 24)
    pizza_b = rect_mask(shape, 10, 28, 36, 54)
    topping = rect_mask(shape, 14, 24, 10, 20)
    build(
        "img-alter", "e-alter", 104,
        [("pizza", 0.9, pizza_a), ("pizza", 0.88, pizza_b)],
        [("pizza", 0.9, pizza_a), ("pizza", 0.88, pizza_b), ("topping", 0.8, topping)],
        [(pizza_a, (0.9, 0.8, 0.5)), (pizza_b, (0.9, 0.8, 0.5))],
        [(topping, (0.7, 0.1, 0.1))],
    )

    car = rect_mask(shape, 20, 44, 16, 48)
    build(
        "img-color", "e-color", 105,
        [("car", 0.9, car)],
        [("car", 0.9, car)],
        [(car, (0.2, 0.2, 0.8))],
        [(car, (1.0, 0.0, 0.0))],
    )
    # Force the color subject to the exact target color (no texture blend).
    edited_color = textured_rgb(105, shape)
    edited_color = paint(edited_color, car, (0.2, 0.2, 0.8))
    edited_color[car] = (1.0, 0.0, 0.0)
    save_image(edited_color, edited_dir / "e-color.png")

    edits = {
        "dog": {"img-add": [{"edit_id": "e-add", "edit_type": "object_addition",
                             "from": "none", "to": "ball", "prompt": "add a ball"}]},
        "sign": {"img-size": [{"edit_id": "e-size", "edit_type": "size_change",
                               "from": "none", "to": "larger",
                               "prompt": "make the sign larger"}]},
        "cup": {"img-remove": [{"edit_id": "e-remove", "edit_type": "object_removal",
                                "from": "none", "to": "", "prompt": "remove the cups"}]},
        "bench": {"img-replace": [{"edit_id": "e-replace", "edit_type": "object_replacement",
                                   "from": "cat", "to": "hat",
                                   "prompt": "replace the cat with a hat"}]},
        "pizza": {"img-alter": [{"edit_id": "e-alter", "edit_type": "alter_parts",
                                 "from": "none", "to": "topping",
                                 "prompt": "add toppings to the pizzas"}]},
        "car": {"img-color": [{"edit_id": "e-color", "edit_type": "color_change",
                               "from": "blue", "to": "red",
                               "prompt": "make the car red"}]},
    }
    edits_path = root / "edits.json"
    edits_path.write_text(json.dumps(edits, indent=2), encoding="utf-8")

    det_input_dir = root / "detections-input"
    det_edited_dir = root / "detections-edited"
    write_archive(
        DetectionArchive(detector="fixture", threshold=0.1, images=input_sets), det_input_dir
    )
    write_archive(
        DetectionArchive(detector="fixture", threshold=0.1, images=edited_sets), det_edited_dir
    )

    expected = {"e-add": 1.0, "e-size": 1.0, "e-remove": 0.5, "e-replace": 1.0, "e-alter": 0.5}
    return PipelineFixture(
        edits_path=edits_path,
        images_dir=images_dir,
        edited_dir=edited_dir,
        det_input_dir=det_input_dir,
        det_edited_dir=det_edited_dir,
        expected=expected,
    )


@pytest.fixture(scope="session")
def pipeline_fixture(tmp_path_factory) -> PipelineFixture:
    return _build_pipeline_fixture(tmp_path_factory.mktemp("run"))
