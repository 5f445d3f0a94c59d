"""Scene domain model and the neutral JSON split format.

A split file is a JSON array of flat per-instance records, everything already
expressed in the agent frame (agent at the origin, heading +y).  The record
layout is the interchange contract between dataset exporters and this
package, so ``SCENE_RECORD_SCHEMA`` pins it down exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import InvalidInputError
from .geometry import Pose
from .validation import as_points, check_finite, check_scalar

# Agent-frame pose of the prediction vehicle itself: origin, facing +y.
AGENT_FRAME_POSE = Pose(0.0, 0.0, math.pi / 2.0)

# Sampling conventions shared by histories, ground truth, and rollouts.
SAMPLE_RATE_HZ = 2.0
HORIZON_S = 6.0
HISTORY_OFFSETS_S = (-2.0, -1.5, -1.0, -0.5)


@dataclass(frozen=True)
class AgentState:
    """Dynamic state of the prediction vehicle at t=0.

    ``yaw_rate`` is in full turns per second, matching the split format.
    """

    category: str
    speed: float
    acceleration: float
    yaw_rate: float
    pose: Pose = AGENT_FRAME_POSE

    def __post_init__(self) -> None:
        if not isinstance(self.category, str) or not self.category:
            raise InvalidInputError("category must be a non-empty string")
        object.__setattr__(self, "speed", check_scalar(self.speed, "speed", minimum=0.0))
        object.__setattr__(self, "acceleration", check_scalar(self.acceleration, "acceleration"))
        object.__setattr__(self, "yaw_rate", check_scalar(self.yaw_rate, "yaw_rate"))

    @property
    def yaw_rate_rad(self) -> float:
        """Yaw rate converted to radians per second."""
        return self.yaw_rate * 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Future positions sampled at a fixed rate out to a fixed horizon."""

    points: np.ndarray
    sample_rate: float = SAMPLE_RATE_HZ
    horizon: float = HORIZON_S

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", as_points(self.points, "trajectory points"))
        object.__setattr__(self, "sample_rate", check_scalar(self.sample_rate, "sample_rate"))
        object.__setattr__(self, "horizon", check_scalar(self.horizon, "horizon"))
        if self.sample_rate <= 0 or self.horizon <= 0:
            raise InvalidInputError("sample_rate and horizon must be positive")
        expected = int(round(self.sample_rate * self.horizon))
        if len(self.points) != expected:
            raise InvalidInputError(
                f"trajectory must have {expected} points at {self.sample_rate} Hz "
                f"over {self.horizon} s, got {len(self.points)}"
            )

    def __len__(self) -> int:
        return len(self.points)

    @property
    def times(self) -> np.ndarray:
        """Timestamps of each point; the first sample is one period after t=0."""
        return (np.arange(len(self.points)) + 1) / self.sample_rate


@dataclass(frozen=True, eq=False)
class Lane:
    """A lane centerline polyline in the agent frame."""

    polyline: np.ndarray
    role: str = "current"

    def __post_init__(self) -> None:
        object.__setattr__(self, "polyline", as_points(self.polyline, "lane polyline"))
        if len(self.polyline) < 2:
            raise InvalidInputError("lane polyline needs at least 2 points")
        if self.role not in ("current", "outgoing"):
            raise InvalidInputError(f"unknown lane role {self.role!r}")


@dataclass(frozen=True)
class OrientedBox:
    """Footprint of another agent: center pose plus extents."""

    pose: Pose
    length: float
    width: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "length", check_scalar(self.length, "length", minimum=0.0))
        object.__setattr__(self, "width", check_scalar(self.width, "width", minimum=0.0))

    def corners(self) -> np.ndarray:
        """Corner points (4, 2) in counter-clockwise order."""
        c, s = math.cos(self.pose.heading), math.sin(self.pose.heading)
        fwd = np.array([c, s]) * (self.length / 2.0)
        left = np.array([-s, c]) * (self.width / 2.0)
        center = self.pose.position
        return np.array([center + fwd + left, center - fwd + left,
                         center - fwd - left, center + fwd - left])


def _as_ring(ring: Any, name: str) -> np.ndarray:
    arr = as_points(ring, name)
    if len(arr) < 3:
        raise InvalidInputError(f"{name} needs at least 3 vertices, got {len(arr)}")
    return arr


@dataclass(frozen=True, eq=False)
class MapLayers:
    """Static map context around the agent, in the agent frame."""

    drivable_area: tuple[np.ndarray, ...] = ()
    crosswalks: tuple[np.ndarray, ...] = ()
    other_agents: tuple[OrientedBox, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "drivable_area",
            tuple(_as_ring(r, "drivable_area ring") for r in self.drivable_area))
        object.__setattr__(
            self, "crosswalks",
            tuple(_as_ring(r, "crosswalk ring") for r in self.crosswalks))
        object.__setattr__(self, "other_agents", tuple(self.other_agents))


@dataclass(frozen=True, eq=False)
class PredictionInstance:
    """Everything known about one prediction problem at decision time."""

    instance_id: str
    agent: AgentState
    history: np.ndarray
    current_lane: Lane | None
    outgoing_lanes: tuple[Lane, ...] = ()
    map_layers: MapLayers = field(default_factory=MapLayers)
    ground_truth: Trajectory | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.instance_id, str) or not self.instance_id:
            raise InvalidInputError("instance_id must be a non-empty string")
        hist = np.array(self.history, dtype=float)
        if hist.size == 0:
            hist = hist.reshape(0, 3)
        if hist.ndim != 2 or hist.shape[1] != 3:
            raise InvalidInputError(f"history must have shape (M, 3), got {hist.shape}")
        check_finite(hist, "history")
        if len(hist):
            if np.any(np.diff(hist[:, 0]) <= 0):
                raise InvalidInputError("history timestamps must be strictly increasing")
            if hist[-1, 0] >= 0:
                raise InvalidInputError("history must end before t=0")
        hist.flags.writeable = False
        object.__setattr__(self, "history", hist)
        object.__setattr__(self, "outgoing_lanes", tuple(self.outgoing_lanes))


# ---------------------------------------------------------------------------
# Neutral JSON split format


_POINT = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_HISTORY_ROW = {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
_LANE = {
    "type": "array",
    "items": _POINT,
    # a lane is either absent (empty list) or a usable polyline
    "anyOf": [{"maxItems": 0}, {"minItems": 2}],
}
_RING = {"type": "array", "items": _POINT, "minItems": 3}
_OTHER_AGENT = {"type": "array", "items": {"type": "number"}, "minItems": 5, "maxItems": 5}

SCENE_RECORD_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": [
        "instance_id", "category", "speed", "acceleration", "yaw_rate",
        "history", "current_lane", "outgoing_lanes", "drivable_area",
        "crosswalks", "other_agents",
    ],
    "properties": {
        "instance_id": {"type": "string", "minLength": 1},
        "category": {"type": "string", "minLength": 1},
        "speed": {"type": "number", "minimum": 0},
        "acceleration": {"type": "number"},
        "yaw_rate": {"type": "number"},
        "history": {"type": "array", "items": _HISTORY_ROW},
        "current_lane": _LANE,
        "outgoing_lanes": {"type": "array", "items": {"type": "array", "items": _POINT, "minItems": 2}},
        "drivable_area": {"type": "array", "items": _RING},
        "crosswalks": {"type": "array", "items": _RING},
        "other_agents": {"type": "array", "items": _OTHER_AGENT},
        "ground_truth": {"type": "array", "items": _POINT, "minItems": 12, "maxItems": 12},
    },
}

SCENE_SPLIT_SCHEMA = {"type": "array", "items": SCENE_RECORD_SCHEMA}


def record_to_instance(record: dict) -> PredictionInstance:
    """Build a :class:`PredictionInstance` from one split record.

    Errors are re-raised with the offending instance_id in the message so a
    bad record inside a large split is easy to locate.
    """
    iid = record.get("instance_id") if isinstance(record, dict) else None
    try:
        return _record_to_instance(record)
    except InvalidInputError as exc:
        raise InvalidInputError(f"instance {iid!r}: {exc}") from exc


def _record_to_instance(record: dict) -> PredictionInstance:
    try:
        agent = AgentState(
            category=record["category"],
            speed=record["speed"],
            acceleration=record["acceleration"],
            yaw_rate=record["yaw_rate"],
        )
        current = record["current_lane"]
        lane = Lane(current, "current") if len(current) else None
        outgoing = tuple(Lane(p, "outgoing") for p in record["outgoing_lanes"])
        layers = MapLayers(
            drivable_area=tuple(np.array(r, dtype=float) for r in record["drivable_area"]),
            crosswalks=tuple(np.array(r, dtype=float) for r in record["crosswalks"]),
            other_agents=tuple(
                OrientedBox(Pose(a[0], a[1], a[2]), a[3], a[4])
                for a in record["other_agents"]
            ),
        )
        gt = record.get("ground_truth")
        truth = Trajectory(gt) if gt is not None else None
        return PredictionInstance(
            instance_id=record["instance_id"],
            agent=agent,
            history=record["history"],
            current_lane=lane,
            outgoing_lanes=outgoing,
            map_layers=layers,
            ground_truth=truth,
        )
    except KeyError as exc:
        raise InvalidInputError(f"split record is missing field {exc}") from exc


def instance_to_record(instance: PredictionInstance) -> dict:
    """Inverse of :func:`record_to_instance`; floats survive bit-exactly."""
    record = {
        "instance_id": instance.instance_id,
        "category": instance.agent.category,
        "speed": instance.agent.speed,
        "acceleration": instance.agent.acceleration,
        "yaw_rate": instance.agent.yaw_rate,
        "history": instance.history.tolist(),
        "current_lane": instance.current_lane.polyline.tolist() if instance.current_lane else [],
        "outgoing_lanes": [lane.polyline.tolist() for lane in instance.outgoing_lanes],
        "drivable_area": [r.tolist() for r in instance.map_layers.drivable_area],
        "crosswalks": [r.tolist() for r in instance.map_layers.crosswalks],
        "other_agents": [
            [box.pose.x, box.pose.y, box.pose.heading, box.length, box.width]
            for box in instance.map_layers.other_agents
        ],
    }
    if instance.ground_truth is not None:
        record["ground_truth"] = instance.ground_truth.points.tolist()
    return record


def validate_split_records(records: Any) -> None:
    """Raise :class:`InvalidInputError` if ``records`` breaks the split schema."""
    import jsonschema

    try:
        jsonschema.validate(records, SCENE_SPLIT_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise InvalidInputError(f"split does not match schema at /{path}: {exc.message}") from exc


def load_split(path: str | Path, validate: bool = True) -> list[PredictionInstance]:
    """Load a split file, schema-checking by default."""
    with open(path) as fh:
        records = json.load(fh)
    if validate:
        validate_split_records(records)
    elif not isinstance(records, list):
        raise InvalidInputError("split file must contain a JSON array")
    return [record_to_instance(rec) for rec in records]


def save_split(path: str | Path, instances: Iterable[PredictionInstance]) -> None:
    records = [instance_to_record(inst) for inst in instances]
    with open(path, "w") as fh:
        json.dump(records, fh)
        fh.write("\n")
