"""Exception types shared across the toolkit."""

from __future__ import annotations


class SceneKitError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(SceneKitError, ValueError):
    """An argument violates an operation's documented preconditions."""


class DegenerateInputError(InvalidInputError):
    """Geometry too degenerate to process (zero length, coincident points)."""


class UndefinedRateError(SceneKitError):
    """A rate metric was requested over an empty collection."""


class ReconciliationError(SceneKitError):
    """Prediction records and split instances do not line up one-to-one."""

    def __init__(self, missing: list[str], unexpected: list[str]):
        self.missing = list(missing)
        self.unexpected = list(unexpected)
        parts = []
        if self.missing:
            parts.append("instances without a prediction: " + ", ".join(self.missing))
        if self.unexpected:
            parts.append("predictions without an instance: " + ", ".join(self.unexpected))
        super().__init__("; ".join(parts) or "prediction records do not match the split")
