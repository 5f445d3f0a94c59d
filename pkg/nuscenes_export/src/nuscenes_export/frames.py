"""Planar frame changes and polygon clipping.

The scene split format places the target agent at the origin with its
heading along +y.  World headings are radians counterclockwise from +x,
so the change of frame is a rotation by (pi/2 - yaw) after centering.
"""

from __future__ import annotations

import math

import numpy as np


def to_agent_frame(points: np.ndarray, x: float, y: float, yaw: float) -> np.ndarray:
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    angle = math.pi / 2.0 - yaw
    c, s = math.cos(angle), math.sin(angle)
    dx = pts[:, 0] - x
    dy = pts[:, 1] - y
    return np.column_stack([c * dx - s * dy, s * dx + c * dy])


def heading_to_agent_frame(heading: float, yaw: float) -> float:
    """Re-express a world heading relative to an agent facing +y."""
    wrapped = (heading + math.pi / 2.0 - yaw) % (2.0 * math.pi)
    return wrapped - 2.0 * math.pi if wrapped > math.pi else wrapped


def wrap_angle(angle: float) -> float:
    wrapped = angle % (2.0 * math.pi)
    return wrapped - 2.0 * math.pi if wrapped > math.pi else wrapped


def clip_polygon(ring: np.ndarray, half_extent: float) -> np.ndarray:
    """Sutherland-Hodgman clip of a polygon ring against the square
    [-half_extent, half_extent]^2.  Returns an empty (0, 2) array when
    nothing remains; degenerate leftovers (< 3 vertices) also count as
    nothing."""
    pts = [tuple(p) for p in np.asarray(ring, dtype=float).reshape(-1, 2)]
    # one pass per box edge: (coordinate index, keep-side sign)
    for axis, sign in ((0, 1.0), (0, -1.0), (1, 1.0), (1, -1.0)):
        if not pts:
            break
        bound = sign * half_extent

        def inside(p: tuple) -> bool:
            return sign * p[axis] <= half_extent

        def intersect(p: tuple, q: tuple) -> tuple:
            t = (bound - p[axis]) / (q[axis] - p[axis])
            return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))

        clipped = []
        for i, q in enumerate(pts):
            p = pts[i - 1]
            if inside(q):
                if not inside(p):
                    clipped.append(intersect(p, q))
                clipped.append(q)
            elif inside(p):
                clipped.append(intersect(p, q))
        pts = clipped
    if len(pts) < 3:
        return np.empty((0, 2), dtype=float)
    return np.array(pts, dtype=float)
