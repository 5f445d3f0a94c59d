"""Planar poses, rigid transforms, and polyline utilities.

The agent frame used throughout the package puts the agent of interest at the
origin with its heading along +y, so "ahead" is always up.  World headings are
measured counter-clockwise from +x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import DegenerateInputError, InvalidInputError
from .validation import as_points, check_scalar

TWO_PI = 2.0 * math.pi


def normalize_angle(theta: float) -> float:
    """Wrap an angle to the interval [-pi, pi)."""
    return (theta + math.pi) % TWO_PI - math.pi


@dataclass(frozen=True)
class Pose:
    """Position plus heading in some planar frame."""

    x: float
    y: float
    heading: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", check_scalar(self.x, "x"))
        object.__setattr__(self, "y", check_scalar(self.y, "y"))
        object.__setattr__(self, "heading", check_scalar(self.heading, "heading"))

    @property
    def position(self) -> np.ndarray:
        return np.array([self.x, self.y])


def _rotation(angle: float) -> np.ndarray:
    # Right-multiplication matrix for row vectors: p @ _rotation(a) rotates p by a.
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, s], [-s, c]])


def transform_to_agent_frame(points: Any, agent_pose: Pose) -> np.ndarray:
    """Map world-frame points into the agent frame of ``agent_pose``.

    The agent lands at the origin with its heading along +y.
    """
    pts = as_points(points)
    angle = math.pi / 2.0 - agent_pose.heading
    return (pts - agent_pose.position) @ _rotation(angle)


def transform_from_agent_frame(points: Any, agent_pose: Pose) -> np.ndarray:
    """Inverse of :func:`transform_to_agent_frame`."""
    pts = as_points(points)
    angle = agent_pose.heading - math.pi / 2.0
    return pts @ _rotation(angle) + agent_pose.position


def heading_to_agent_frame(heading: float, agent_pose: Pose) -> float:
    """Re-express a world heading in the agent frame."""
    return normalize_angle(heading + math.pi / 2.0 - agent_pose.heading)


def polyline_arc_length(polyline: Any) -> float:
    pts = as_points(polyline, "polyline")
    if len(pts) < 2:
        return 0.0
    seg = np.diff(pts, axis=0)
    return float(np.hypot(seg[:, 0], seg[:, 1]).sum())


def cumulative_arc_length(points: np.ndarray) -> np.ndarray:
    seg = np.diff(points, axis=0)
    return np.concatenate([[0.0], np.cumsum(np.hypot(seg[:, 0], seg[:, 1]))])


def resample_polyline(polyline: Any, spacing: float) -> np.ndarray:
    """Resample a polyline at a fixed arc-length spacing.

    Samples sit at arc lengths 0, spacing, 2*spacing, ... along the input.
    The exact last input point always survives: the final uniform sample is
    replaced by it when it already lies within spacing/2 of the end, and it
    is appended otherwise.  A polyline shorter than one spacing therefore
    resamples to its two endpoints.
    """
    spacing = check_scalar(spacing, "spacing")
    if spacing <= 0.0:
        raise InvalidInputError(f"spacing must be positive, got {spacing}")
    pts = as_points(polyline, "polyline")
    if len(pts) < 2:
        raise InvalidInputError("polyline needs at least 2 points")
    cum = cumulative_arc_length(pts)
    total = float(cum[-1])
    if total <= 0.0:
        raise DegenerateInputError("polyline has zero length")

    count = int(math.floor(total / spacing + 1e-9))
    stations = np.arange(count + 1) * spacing
    samples = np.column_stack(
        [np.interp(stations, cum, pts[:, 0]), np.interp(stations, cum, pts[:, 1])]
    )
    end = pts[-1]
    if len(samples) > 1 and math.hypot(*(samples[-1] - end)) <= spacing / 2.0:
        samples[-1] = end
    else:
        samples = np.vstack([samples, end])
    return samples
