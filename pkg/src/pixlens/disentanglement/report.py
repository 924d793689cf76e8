"""End-to-end disentanglement evaluation over a latent archive."""

from __future__ import annotations

from pathlib import Path

from .latents import build_tuples, collect_attribute_object_latents, load_latent_archive
from .scores import inter_sample_report, intra_sample_report
from .zdiff import (
    CLASS_NAMES,
    DEFAULT_CLASS_CAP,
    DEFAULT_EPOCHS,
    DEFAULT_TEST_FRACTION,
    build_zdiff_dataset,
    train_linear_classifier,
)


def run_disentanglement(
    latents_dir: str | Path,
    epochs: int = DEFAULT_EPOCHS,
    test_fraction: float = DEFAULT_TEST_FRACTION,
    seed: int = 0,
    class_cap: int = DEFAULT_CLASS_CAP,
) -> dict:
    """Intra-sample, inter-sample, and Z-diff scores as a JSON-ready dict."""
    archive = load_latent_archive(latents_dir)
    tuples, skipped = build_tuples(archive)

    intra = intra_sample_report(tuples)
    inter = inter_sample_report(tuples)

    dataset = build_zdiff_dataset(
        collect_attribute_object_latents(archive), class_cap=class_cap, seed=seed
    )
    trained = train_linear_classifier(
        dataset, epochs=epochs, test_fraction=test_fraction, seed=seed
    )

    return {
        "latent_dim": archive.dim,
        "tuples": len(tuples),
        "tuples_skipped": skipped,
        "seed": seed,
        "epochs": epochs,
        "test_fraction": test_fraction,
        "intra_sample": {
            "overall": intra.overall,
            "per_category": intra.per_category,
        },
        "inter_sample": {
            "per_category": inter.per_category,
            "per_pair": inter.per_pair,
            "skipped_pairs": inter.skipped_pairs,
        },
        "zdiff": {
            "classes": list(CLASS_NAMES),
            "accuracy": trained.accuracy,
            "balanced_accuracy": trained.balanced_accuracy,
            "confusion_matrix": trained.confusion_matrix.tolist(),
            "train_size": trained.train_size,
            "test_size": trained.test_size,
            "class_cap": class_cap,
            "notes": dataset.notes,
        },
    }
