"""Input validation helpers.

Every public entry point funnels array-like arguments through these so that
bad shapes and non-finite values fail loudly at the boundary instead of
producing garbage downstream.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .errors import InvalidInputError


def check_finite(values: Any, name: str = "values") -> np.ndarray:
    """Coerce to float64 and reject NaN or Inf anywhere."""
    arr = np.asarray(values, dtype=float)
    if arr.size and not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} must be finite, found NaN or Inf")
    return arr


def check_scalar(value: Any, name: str, minimum: float | None = None) -> float:
    val = float(value)
    if not np.isfinite(val):
        raise InvalidInputError(f"{name} must be finite, got {value!r}")
    if minimum is not None and val < minimum:
        raise InvalidInputError(f"{name} must be >= {minimum}, got {val}")
    return val


def as_points(points: Any, name: str = "points") -> np.ndarray:
    """Return a read-only (N, 2) float64 copy of ``points``."""
    arr = np.array(points, dtype=float)
    if arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidInputError(f"{name} must have shape (N, 2), got {arr.shape}")
    check_finite(arr, name)
    arr.flags.writeable = False
    return arr


def as_point_stack(stack: Any, name: str = "trajectories") -> np.ndarray:
    """Return a read-only (n, T, 2) float64 copy of a batch of point rows."""
    arr = np.array(stack, dtype=float)
    if arr.size == 0:
        arr = arr.reshape(0, 0, 2)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise InvalidInputError(f"{name} must have shape (n, T, 2), got {arr.shape}")
    check_finite(arr, name)
    arr.flags.writeable = False
    return arr
