"""Exception types shared across the engine."""


class PixlensError(Exception):
    """Base class for all engine errors."""


class MalformedMask(PixlensError):
    """Run-length data inconsistent with the declared mask size."""


class EmptyMask(PixlensError):
    """An operation that needs foreground pixels got an all-false mask."""


class EmptyBackground(PixlensError):
    """The exclusion mask covers the whole image."""


class ArchiveError(PixlensError):
    """A detection or latent archive is missing or structurally invalid."""


class EvaluationFailed(PixlensError):
    """Detections required by an evaluator are unavailable."""


class UnknownColor(PixlensError):
    """Color name not present in the named-color table."""


class UnknownDirection(PixlensError):
    """No recognized direction keyword in a positional attribute."""


class DatasetError(PixlensError):
    """An edit dataset file violates the documented schema."""


class RunError(PixlensError):
    """A per-edit artifact (image or detection set) is missing at run time."""


class DegenerateLatent(PixlensError):
    """A latent vector has zero norm where a direction or scale is needed."""


class EmptyDataset(PixlensError):
    """No records to aggregate."""


class DegenerateDataset(PixlensError):
    """Classifier training needs at least two classes."""
