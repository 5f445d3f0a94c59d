"""Cubic Bezier curves for compact lane encoding.

A lane polyline is compressed to the four control points of a single cubic,
with the first and last control point pinned to the exact lane endpoints.
The two interior control points come from a linear least-squares fit under
chord-length parameterization, which decouples per axis into one shared 2x2
normal system.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import DegenerateInputError, InvalidInputError
from .validation import as_points, check_finite

# Only the two interior control points are free, so the normal equations are
# 2x2 regardless of polyline length.
_N_FREE = 2


@dataclass(frozen=True, eq=False)
class CubicBezier:
    """A cubic Bezier curve defined by four 2-D control points."""

    p0: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray

    def __post_init__(self) -> None:
        for name in ("p0", "p1", "p2", "p3"):
            pt = check_finite(getattr(self, name), name)
            if pt.shape != (2,):
                raise InvalidInputError(f"{name} must have shape (2,), got {pt.shape}")
            pt = pt.copy()
            pt.flags.writeable = False
            object.__setattr__(self, name, pt)

    @property
    def control_points(self) -> np.ndarray:
        """All four control points stacked as a (4, 2) array."""
        return np.array([self.p0, self.p1, self.p2, self.p3])


def _bernstein(t: np.ndarray) -> np.ndarray:
    """Cubic Bernstein basis values, shape (len(t), 4)."""
    u = 1.0 - t
    return np.column_stack([u ** 3, 3.0 * u ** 2 * t, 3.0 * u * t ** 2, t ** 3])


def evaluate(curve: CubicBezier, t: Any) -> np.ndarray:
    """Evaluate the curve at parameter(s) ``t`` in [0, 1].

    Scalar ``t`` gives a (2,) point, an array of parameters a (len(t), 2)
    array of points.
    """
    ts = np.asarray(t, dtype=float)
    scalar = ts.ndim == 0
    ts = np.atleast_1d(ts)
    check_finite(ts, "t")
    if np.any((ts < 0.0) | (ts > 1.0)):
        raise InvalidInputError("t must lie in [0, 1]")
    points = _bernstein(ts) @ curve.control_points
    return points[0] if scalar else points


def chord_length_params(polyline: Any) -> np.ndarray:
    """Normalized cumulative chord lengths in [0, 1], one per input point."""
    pts = as_points(polyline, "polyline")
    if len(pts) < 2:
        raise InvalidInputError("polyline needs at least 2 points")
    seg = np.diff(pts, axis=0)
    cum = np.concatenate([[0.0], np.cumsum(np.hypot(seg[:, 0], seg[:, 1]))])
    total = cum[-1]
    if total <= 0.0:
        raise DegenerateInputError("polyline has zero total chord length")
    return cum / total


def _straight_line_init(p0: np.ndarray, p3: np.ndarray) -> np.ndarray:
    """Interior control points of the straight segment from p0 to p3."""
    return np.array([p0 + (p3 - p0) / 3.0, p0 + 2.0 * (p3 - p0) / 3.0])


def fit_lane(polyline: Any) -> CubicBezier:
    """Fit a cubic to a polyline, endpoints pinned to the polyline's ends.

    With only two points the result is the straight-line cubic.  With three
    points the system is underdetermined, so the interior points are the
    minimum-norm correction of the straight-line initialization.  Four or
    more points give the unique least-squares solution under chord-length
    parameterization.
    """
    pts = as_points(polyline, "polyline")
    if len(pts) < 2:
        raise InvalidInputError("polyline needs at least 2 points")
    t = chord_length_params(pts)
    p0, p3 = pts[0].copy(), pts[-1].copy()
    if len(pts) == 2:
        interior = _straight_line_init(p0, p3)
        return CubicBezier(p0, interior[0], interior[1], p3)

    basis = _bernstein(t)
    # Residual once the pinned endpoint terms are moved to the right side.
    target = pts - np.outer(basis[:, 0], p0) - np.outer(basis[:, 3], p3)
    design = basis[:, 1:3]
    gram = design.T @ design
    rhs = design.T @ target
    det = gram[0, 0] * gram[1, 1] - gram[0, 1] * gram[1, 0]
    scale = gram[0, 0] * gram[1, 1]
    if len(pts) == 3 or det <= 1e-12 * max(scale, 1e-30):
        # Underdetermined (or numerically so): smallest correction of the
        # straight-line initialization that still satisfies the fit.
        init = _straight_line_init(p0, p3)
        if np.linalg.norm(design, ord=2) <= 1e-8:
            # All interior weights are numerically zero (parameters pile up
            # at the endpoints).  Inverting such a design only amplifies
            # rounding noise, so keep the straight-line interior.
            interior = init
        else:
            interior = init + np.linalg.pinv(design) @ (target - design @ init)
    else:
        inv = np.array([[gram[1, 1], -gram[0, 1]], [-gram[1, 0], gram[0, 0]]]) / det
        interior = inv @ rhs
    return CubicBezier(p0, interior[0], interior[1], p3)


def fit_error(curve: CubicBezier, polyline: Any) -> float:
    """Mean squared distance between the polyline and the curve at the
    polyline's own chord-length parameters."""
    pts = as_points(polyline, "polyline")
    t = chord_length_params(pts)
    diff = evaluate(curve, t) - pts
    return float(np.mean(np.sum(diff * diff, axis=1)))
