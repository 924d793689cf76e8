"""Fixed object/attribute vocabulary and the prompt grid built from it."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations


class AttributeCategory(str, Enum):
    TEXTURE = "texture"
    COLOR = "color"
    STYLE = "style"
    PATTERN = "pattern"


# Reporting order (matches the confusion-matrix axis order).
CATEGORY_ORDER: tuple[AttributeCategory, ...] = (
    AttributeCategory.COLOR,
    AttributeCategory.PATTERN,
    AttributeCategory.STYLE,
    AttributeCategory.TEXTURE,
)

OBJECTS: tuple[str, ...] = (
    "chair",
    "bowl",
    "plate",
    "nail",
    "bucket",
    "backpack",
    "book",
    "ball",
    "clock",
    "donut",
)

ATTRIBUTES: dict[AttributeCategory, tuple[str, ...]] = {
    AttributeCategory.TEXTURE: ("steel", "wood", "glass", "plastic", "wool", "cotton", "silk"),
    AttributeCategory.COLOR: (
        "verdant",
        "red",
        "azure",
        "green",
        "gold",
        "purple",
        "black",
        "pink",
    ),
    AttributeCategory.STYLE: (
        "vintage",
        "modern",
        "abstract",
        "realistic",
        "cartoon",
        "surreal",
        "expressionist",
        "futuristic",
        "retro",
    ),
    AttributeCategory.PATTERN: (
        "striped",
        "polka dot",
        "plaid",
        "paisley",
        "floral",
        "geometric",
        "abstract",
        "animal print",
        "checkered",
        "herringbone",
    ),
}


@dataclass(frozen=True)
class PromptEntry:
    """One prompt the latent extractor must run; object is None for bare
    attribute prompts. An attribute shared by several categories (e.g.
    "abstract") yields a single entry carrying all of them."""

    prompt: str
    attribute: str
    categories: tuple[str, ...]
    object: str | None = None


@dataclass(frozen=True)
class AttributePair:
    category: str
    a1: str
    a2: str


@dataclass(frozen=True)
class PromptGrid:
    prompts: tuple[PromptEntry, ...]
    pairs: tuple[AttributePair, ...]


def attribute_prompt(attribute: str, obj: str | None = None) -> str:
    return f"{attribute} {obj}".lower() if obj else attribute.lower()


def build_prompt_grid() -> PromptGrid:
    """Every attribute/object prompt, bare attribute prompts, and all
    unordered attribute pairs per category, in deterministic order."""
    by_prompt: dict[str, PromptEntry] = {}

    def add(prompt: str, attribute: str, category: AttributeCategory, obj: str | None) -> None:
        existing = by_prompt.get(prompt)
        if existing is None:
            by_prompt[prompt] = PromptEntry(
                prompt=prompt, attribute=attribute, categories=(category.value,), object=obj
            )
        elif category.value not in existing.categories:
            by_prompt[prompt] = PromptEntry(
                prompt=prompt,
                attribute=attribute,
                categories=existing.categories + (category.value,),
                object=obj,
            )

    for category in CATEGORY_ORDER:
        for attribute in ATTRIBUTES[category]:
            add(attribute_prompt(attribute), attribute, category, None)
            for obj in OBJECTS:
                add(attribute_prompt(attribute, obj), attribute, category, obj)

    pairs = tuple(
        AttributePair(category.value, a1, a2)
        for category in CATEGORY_ORDER
        for a1, a2 in combinations(ATTRIBUTES[category], 2)
    )
    return PromptGrid(prompts=tuple(by_prompt.values()), pairs=pairs)


def grid_to_dict(grid: PromptGrid, canvas: tuple[int, int] = (512, 512)) -> dict:
    """JSON-ready form consumed by the latent-extraction bridge."""
    return {
        "canvas": list(canvas),
        "objects": list(OBJECTS),
        "categories": {c.value: list(ATTRIBUTES[c]) for c in CATEGORY_ORDER},
        "prompts": [
            {
                "prompt": entry.prompt,
                "attribute": entry.attribute,
                "categories": list(entry.categories),
                "object": entry.object,
            }
            for entry in grid.prompts
        ],
        "pairs": [{"category": p.category, "a1": p.a1, "a2": p.a2} for p in grid.pairs],
    }
