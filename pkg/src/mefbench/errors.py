"""Exception types shared across the package."""


class MefbenchError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(MefbenchError):
    """Two images that must share a shape do not."""


class PlaneTooSmall(MefbenchError):
    """An image is smaller than the minimum a metric supports."""


class DegenerateEntropy(MefbenchError):
    """A normalization denominator built from entropies is zero."""


class DecodeError(MefbenchError):
    """An image file exists but cannot be decoded."""


class MissingCounterpart(MefbenchError):
    """An image pair directory is missing one of its two exposures."""


class EmptyDataset(MefbenchError):
    """An operation requires at least one image pair."""


class EmptyMatrix(MefbenchError):
    """A score matrix has no rankable content."""
