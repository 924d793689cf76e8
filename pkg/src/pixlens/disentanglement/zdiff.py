"""Z-diff dataset construction and the linear attribute classifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ..errors import DegenerateDataset
from .vocabulary import ATTRIBUTES, CATEGORY_ORDER, OBJECTS, AttributeCategory

DEFAULT_EPOCHS = 50
DEFAULT_TEST_FRACTION = 0.3
DEFAULT_LEARNING_RATE = 0.1
DEFAULT_CLASS_CAP = 2000

CLASS_NAMES = tuple(category.value for category in CATEGORY_ORDER)


@dataclass
class ZDiffDataset:
    features: np.ndarray  # (n, dim) non-negative
    labels: np.ndarray  # (n,) indices into CLASS_NAMES
    notes: list[str] = field(default_factory=list)


def build_zdiff_dataset(
    latents: dict[tuple[AttributeCategory, str, str], np.ndarray],
    class_cap: int = DEFAULT_CLASS_CAP,
    seed: int = 0,
) -> ZDiffDataset:
    """|z_(a,o) - z_(a,o')| features labeled by attribute category.

    For every attribute and every unordered object pair sharing it, the
    element-wise absolute difference becomes one example. Classes larger
    than class_cap are subsampled with the seeded generator.
    """
    rng = np.random.default_rng(seed)
    per_class: dict[AttributeCategory, list[np.ndarray]] = {c: [] for c in CATEGORY_ORDER}
    notes: list[str] = []
    for category in CATEGORY_ORDER:
        for attribute in ATTRIBUTES[category]:
            present = [
                (obj, latents[(category, attribute, obj)])
                for obj in OBJECTS
                if (category, attribute, obj) in latents
            ]
            if len(present) < 2:
                notes.append(
                    f"skipped attribute {attribute!r} ({category.value}): "
                    f"{len(present)} object latents"
                )
                continue
            for (_, za), (_, zb) in combinations(present, 2):
                per_class[category].append(np.abs(za - zb))

    features: list[np.ndarray] = []
    labels: list[int] = []
    for index, category in enumerate(CATEGORY_ORDER):
        examples = per_class[category]
        if len(examples) > class_cap:
            keep = np.sort(rng.choice(len(examples), size=class_cap, replace=False))
            examples = [examples[i] for i in keep]
            notes.append(f"subsampled {category.value} to {class_cap} examples")
        features.extend(examples)
        labels.extend([index] * len(examples))

    if features:
        x = np.stack(features).astype(np.float64)
        y = np.array(labels, dtype=np.intp)
    else:
        x = np.empty((0, 0))
        y = np.empty((0,), dtype=np.intp)
    return ZDiffDataset(features=x, labels=y, notes=notes)


class SoftmaxClassifier:
    """Multinomial logistic regression, full-batch gradient descent.

    Deterministic: weights start at zero and the update order is fixed,
    so identical data yields identical parameters.
    """

    def __init__(
        self,
        epochs: int = DEFAULT_EPOCHS,
        learning_rate: float = DEFAULT_LEARNING_RATE,
        n_classes: int = len(CLASS_NAMES),
    ) -> None:
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.n_classes = n_classes
        self.coef_: np.ndarray | None = None
        self.intercept_: np.ndarray | None = None

    def get_params(self) -> dict:
        return {
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "n_classes": self.n_classes,
        }

    def set_params(self, **params) -> "SoftmaxClassifier":
        for key, value in params.items():
            if not hasattr(self, key):
                raise ValueError(f"unknown parameter {key!r}")
            setattr(self, key, value)
        return self

    @staticmethod
    def _softmax(logits: np.ndarray) -> np.ndarray:
        shifted = logits - logits.max(axis=1, keepdims=True)
        exp = np.exp(shifted)
        return exp / exp.sum(axis=1, keepdims=True)

    def fit(self, x: np.ndarray, y: np.ndarray) -> "SoftmaxClassifier":
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.intp)
        n_samples, n_features = x.shape
        one_hot = np.zeros((n_samples, self.n_classes))
        one_hot[np.arange(n_samples), y] = 1.0

        self.coef_ = np.zeros((n_features, self.n_classes))
        self.intercept_ = np.zeros(self.n_classes)
        for _ in range(self.epochs):
            probabilities = self._softmax(x @ self.coef_ + self.intercept_)
            error = (probabilities - one_hot) / n_samples
            self.coef_ -= self.learning_rate * (x.T @ error)
            self.intercept_ -= self.learning_rate * error.sum(axis=0)
        return self

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        if self.coef_ is None:
            raise RuntimeError("classifier is not fitted")
        return self._softmax(np.asarray(x, dtype=np.float64) @ self.coef_ + self.intercept_)

    def predict(self, x: np.ndarray) -> np.ndarray:
        return np.argmax(self.predict_proba(x), axis=1)

    def score(self, x: np.ndarray, y: np.ndarray) -> float:
        return float(np.mean(self.predict(x) == np.asarray(y)))


def stratified_split(
    labels: np.ndarray, test_fraction: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Seeded per-class split; returns (train_indices, test_indices)."""
    rng = np.random.default_rng(seed)
    train: list[np.ndarray] = []
    test: list[np.ndarray] = []
    for label in np.unique(labels):
        indices = np.flatnonzero(labels == label)
        order = rng.permutation(indices)
        n_test = int(round(test_fraction * len(indices)))
        if len(indices) >= 2:
            n_test = min(max(n_test, 1), len(indices) - 1)
        else:
            n_test = 0  # a singleton class cannot be stratified
        test.append(order[:n_test])
        train.append(order[n_test:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


@dataclass
class TrainResult:
    classifier: SoftmaxClassifier
    accuracy: float
    balanced_accuracy: float
    confusion_matrix: np.ndarray  # (4, 4) ints, rows actual, cols predicted
    train_size: int
    test_size: int
    feature_mean: np.ndarray
    feature_std: np.ndarray


def train_linear_classifier(
    dataset: ZDiffDataset,
    epochs: int = DEFAULT_EPOCHS,
    test_fraction: float = DEFAULT_TEST_FRACTION,
    seed: int = 0,
    learning_rate: float = DEFAULT_LEARNING_RATE,
) -> TrainResult:
    """Seeded stratified split, train-split standardization, GD training.

    Returns test accuracy, balanced accuracy (mean per-class recall),
    and the confusion matrix over the four attribute categories.
    """
    x, y = dataset.features, dataset.labels
    if x.size == 0:
        raise DegenerateDataset("empty dataset")
    if np.unique(y).size < 2:
        raise DegenerateDataset("need at least two classes")

    train_idx, test_idx = stratified_split(y, test_fraction, seed)
    mean = x[train_idx].mean(axis=0)
    std = x[train_idx].std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    x_std = (x - mean) / std

    classifier = SoftmaxClassifier(epochs=epochs, learning_rate=learning_rate)
    classifier.fit(x_std[train_idx], y[train_idx])

    predictions = classifier.predict(x_std[test_idx])
    actual = y[test_idx]
    n = len(CLASS_NAMES)
    confusion = np.zeros((n, n), dtype=np.int64)
    np.add.at(confusion, (actual, predictions), 1)

    accuracy = float(np.trace(confusion)) / len(actual)
    recalls = [
        confusion[c, c] / confusion[c].sum() for c in range(n) if confusion[c].sum() > 0
    ]
    balanced = float(np.mean(recalls))
    return TrainResult(
        classifier=classifier,
        accuracy=accuracy,
        balanced_accuracy=balanced,
        confusion_matrix=confusion,
        train_size=len(train_idx),
        test_size=len(test_idx),
        feature_mean=mean,
        feature_std=std,
    )
