"""Latent-space disentanglement: prompt grid, scores, Z-diff classifier."""

from .latents import LatentArchive, LatentTuple, build_tuples, load_latent_archive
from .scores import (
    inter_sample_intra_attribute_score,
    inter_sample_report,
    intra_sample_report,
    intra_sample_score,
)
from .vocabulary import (
    ATTRIBUTES,
    CATEGORY_ORDER,
    OBJECTS,
    AttributeCategory,
    PromptGrid,
    build_prompt_grid,
)
from .zdiff import SoftmaxClassifier, build_zdiff_dataset, train_linear_classifier

__all__ = [
    "ATTRIBUTES",
    "AttributeCategory",
    "CATEGORY_ORDER",
    "LatentArchive",
    "LatentTuple",
    "OBJECTS",
    "PromptGrid",
    "SoftmaxClassifier",
    "build_prompt_grid",
    "build_tuples",
    "build_zdiff_dataset",
    "inter_sample_intra_attribute_score",
    "inter_sample_report",
    "intra_sample_report",
    "intra_sample_score",
    "load_latent_archive",
    "train_linear_classifier",
]
