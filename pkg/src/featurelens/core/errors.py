"""Exception and warning types raised by FeatureLens."""

from __future__ import annotations


class FeatureLensError(Exception):
    """Base class for all FeatureLens errors."""


# Image I/O

class UnreadableFile(FeatureLensError):
    """An image or artifact file could not be read or decoded."""


class EmptyImage(FeatureLensError, ValueError):
    """An image with zero pixels."""


class OutOfRange(FeatureLensError, ValueError):
    """A pixel value outside [0, 1] with clamping disabled."""


class ImageTooSmall(FeatureLensError, ValueError):
    """Image smaller than the filter support requires."""


# Feature pipeline

class DimensionMismatch(FeatureLensError, ValueError):
    """Vector or matrix width does not match what the consumer expects."""


class TooFewSamples(FeatureLensError, ValueError):
    """Not enough rows to fit a statistic."""


class InsufficientReference(FeatureLensError, ValueError):
    """Fewer than two clean rows available for the MMD reference."""


class NonFiniteInput(FeatureLensError, ValueError):
    """NaN or infinite value in training data."""


# Detectors

class SingleClass(FeatureLensError, ValueError):
    """Training labels contain only one class."""


class CorruptModel(FeatureLensError):
    """Model file is truncated, not JSON, or structurally invalid."""


class VersionMismatch(FeatureLensError):
    """Model file format version is not supported by this build."""


class WrongModelKind(FeatureLensError, ValueError):
    """Operation requires a different detector kind."""


# Analysis

class SingleClassAuc(FeatureLensError, ValueError):
    """AUC requested for labels containing only one class."""


class ZeroDisplacement(FeatureLensError, ValueError):
    """Clean and adversarial feature vectors coincide."""


# Warnings

class FeatureLensWarning(UserWarning):
    """Base class for recoverable numerical degeneracies."""


class ConstantColumn(FeatureLensWarning):
    """A feature column has zero variance; its std was set to 1."""


class DegenerateReference(FeatureLensWarning):
    """All MMD reference points coincide; bandwidth was set to 1."""
