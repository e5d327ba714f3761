"""Exception types raised across the package."""

from __future__ import annotations


class PixVlcError(Exception):
    """Base class for all package errors."""


class LevelRangeError(PixVlcError, ValueError):
    """A value lies outside the range an operation accepts."""


class StructureError(PixVlcError, ValueError):
    """Mismatched shapes, e.g. a pixel state of the wrong length."""


class FramingError(PixVlcError, ValueError):
    """A bit or sample stream does not divide into whole symbols."""


class CapabilityError(PixVlcError, ValueError):
    """The pixel array cannot realise the requested modulation order."""


class DomainError(PixVlcError, ValueError):
    """A numeric target lies outside the achievable domain."""


class InsufficientDataError(PixVlcError, ValueError):
    """Too few calibration points to fit a model."""


class ValidationError(PixVlcError, ValueError):
    """A configuration failed validation; ``problems`` lists every failure."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class DegenerateFitWarning(UserWarning):
    """Issued when a fit has no distance dependence."""
