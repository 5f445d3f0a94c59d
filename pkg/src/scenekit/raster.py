"""Agent-centric semantic rasterization to RGB images.

The agent sits at a fixed pixel with +y (its heading) pointing up the image.
Layers paint in a fixed order, later over earlier: background, drivable
area, crosswalks, other agents, target agent.  Fill uses the even-odd rule
sampled at each pixel's exact lattice point, with points on a polygon edge
counted as inside, so painted extents follow directly from the config
arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .errors import InvalidInputError
from .scene import OrientedBox, PredictionInstance
from .validation import as_points, check_scalar

# World-units slack when deciding whether a lattice point sits on a polygon
# edge; keeps boundary pixels stable against rigid-motion float noise.
_EDGE_TOL = 1e-9

DEFAULT_COLORS: dict[str, tuple[int, int, int]] = {
    "background": (0, 0, 0),
    "drivable_area": (64, 64, 64),
    "crosswalks": (160, 160, 160),
    "other_agents": (0, 0, 255),
    "target_agent": (255, 0, 0),
}


@dataclass(frozen=True)
class RasterConfig:
    resolution: float = 0.1
    width_px: int = 500
    height_px: int = 500
    ahead: float = 40.0
    behind: float = 10.0
    left: float = 25.0
    right: float = 25.0
    # Target box dims are a convention, not data; a typical sedan footprint
    # keeps the anchor pixel test exact at 0.1 m/px.
    target_length: float = 4.5
    target_width: float = 2.0
    color_map: Mapping[str, tuple[int, int, int]] = field(
        default_factory=lambda: dict(DEFAULT_COLORS))

    def __post_init__(self) -> None:
        for name in ("resolution", "ahead", "behind", "left", "right",
                     "target_length", "target_width"):
            object.__setattr__(self, name, check_scalar(getattr(self, name), name))
        if self.resolution <= 0:
            raise InvalidInputError("resolution must be positive")
        if self.target_length <= 0 or self.target_width <= 0:
            raise InvalidInputError("target box extents must be positive")
        if min(self.ahead, self.behind, self.left, self.right) < 0:
            raise InvalidInputError("view extents must be non-negative")
        if self.width_px < 1 or self.height_px < 1:
            raise InvalidInputError("image dimensions must be positive")
        if abs(self.ahead + self.behind - self.height_px * self.resolution) > 1e-9:
            raise InvalidInputError("ahead + behind must equal height_px * resolution")
        if abs(self.left + self.right - self.width_px * self.resolution) > 1e-9:
            raise InvalidInputError("left + right must equal width_px * resolution")
        missing = set(DEFAULT_COLORS) - set(self.color_map)
        if missing:
            raise InvalidInputError(f"color_map is missing layers: {sorted(missing)}")


@dataclass(frozen=True, eq=False)
class RasterImage:
    width_px: int
    height_px: int
    pixels: bytes

    def __post_init__(self) -> None:
        if len(self.pixels) != self.width_px * self.height_px * 3:
            raise InvalidInputError("pixel buffer size does not match dimensions")

    @classmethod
    def from_array(cls, array: np.ndarray) -> "RasterImage":
        arr = np.ascontiguousarray(array, dtype=np.uint8)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise InvalidInputError(f"image array must have shape (H, W, 3), got {arr.shape}")
        return cls(arr.shape[1], arr.shape[0], arr.tobytes())

    def to_array(self) -> np.ndarray:
        return np.frombuffer(self.pixels, dtype=np.uint8).reshape(
            self.height_px, self.width_px, 3)

    def save_png(self, path: str | Path) -> None:
        from PIL import Image

        Image.fromarray(self.to_array(), "RGB").save(str(path), format="PNG")

    def save_ppm(self, path: str | Path) -> None:
        with open(path, "wb") as fh:
            fh.write(f"P6\n{self.width_px} {self.height_px}\n255\n".encode("ascii"))
            fh.write(self.pixels)


def world_to_pixel(point: Any, config: RasterConfig) -> tuple[int, int] | None:
    """Map an agent-frame point to (row, col), or None outside the extents."""
    x, y = float(point[0]), float(point[1])
    row = math.floor((config.ahead - y) / config.resolution + _EDGE_TOL)
    col = math.floor((x + config.left) / config.resolution + _EDGE_TOL)
    if 0 <= row < config.height_px and 0 <= col < config.width_px:
        return row, col
    return None


def _lattice(config: RasterConfig) -> tuple[np.ndarray, np.ndarray]:
    # World coordinates of each pixel's own lattice point: the point that
    # world_to_pixel maps back to exactly that (row, col).
    xs = np.arange(config.width_px) * config.resolution - config.left
    ys = config.ahead - np.arange(config.height_px) * config.resolution
    return xs, ys


def _fill_polygon(image: np.ndarray, ring: np.ndarray, color: tuple[int, int, int],
                  xs: np.ndarray, ys: np.ndarray) -> None:
    """Paint pixels whose lattice point is inside ``ring`` (even-odd rule,
    edges inclusive)."""
    rx, ry = ring[:, 0], ring[:, 1]
    col_lo = int(np.searchsorted(xs, rx.min() - _EDGE_TOL, side="left"))
    col_hi = int(np.searchsorted(xs, rx.max() + _EDGE_TOL, side="right"))
    # ys decreases with row index
    row_lo = int(np.searchsorted(-ys, -(ry.max() + _EDGE_TOL), side="left"))
    row_hi = int(np.searchsorted(-ys, -(ry.min() - _EDGE_TOL), side="right"))
    if col_lo >= col_hi or row_lo >= row_hi:
        return
    gx = xs[col_lo:col_hi]
    gy = ys[row_lo:row_hi]
    inside = np.zeros((len(gy), len(gx)), dtype=bool)
    boundary = np.zeros_like(inside)

    n = len(ring)
    for i in range(n):
        x1, y1 = float(rx[i]), float(ry[i])
        x2, y2 = float(rx[(i + 1) % n]), float(ry[(i + 1) % n])
        if x1 == x2 and y1 == y2:
            continue
        crosses = (y1 > gy) != (y2 > gy)
        if crosses.any():
            xc = x1 + (gy - y1) * (x2 - x1) / (y2 - y1)
            inside ^= crosses[:, None] & (gx[None, :] < xc[:, None])
        # Edge-inclusive pass: lattice points within tolerance of the segment.
        ex, ey = x2 - x1, y2 - y1
        seg_sq = ex * ex + ey * ey
        t = ((gx[None, :] - x1) * ex + (gy[:, None] - y1) * ey) / seg_sq
        t = np.clip(t, 0.0, 1.0)
        dx = gx[None, :] - (x1 + t * ex)
        dy = gy[:, None] - (y1 + t * ey)
        boundary |= dx * dx + dy * dy <= _EDGE_TOL * _EDGE_TOL

    mask = inside | boundary
    image[row_lo:row_hi, col_lo:col_hi][mask] = color


def render(instance: PredictionInstance, config: RasterConfig | None = None) -> RasterImage:
    """Rasterize one instance.  Layer paint order is part of the contract."""
    config = config or RasterConfig()
    image = np.empty((config.height_px, config.width_px, 3), dtype=np.uint8)
    image[:] = config.color_map["background"]
    xs, ys = _lattice(config)

    for ring in instance.map_layers.drivable_area:
        _fill_polygon(image, ring, config.color_map["drivable_area"], xs, ys)
    for ring in instance.map_layers.crosswalks:
        _fill_polygon(image, ring, config.color_map["crosswalks"], xs, ys)
    for box in instance.map_layers.other_agents:
        _fill_polygon(image, box.corners(), config.color_map["other_agents"], xs, ys)

    target = OrientedBox(instance.agent.pose, config.target_length, config.target_width)
    _fill_polygon(image, target.corners(), config.color_map["target_agent"], xs, ys)
    return RasterImage.from_array(image)


def target_centroid_pixel(image: RasterImage, config: RasterConfig | None = None) -> tuple[float, float]:
    """Mean (row, col) of target-colored pixels; the anchor-pixel check."""
    config = config or RasterConfig()
    arr = image.to_array()
    mask = np.all(arr == np.array(config.color_map["target_agent"], dtype=np.uint8), axis=2)
    rows, cols = np.nonzero(mask)
    if len(rows) == 0:
        raise InvalidInputError("image contains no target-agent pixels")
    return float(rows.mean()), float(cols.mean())
