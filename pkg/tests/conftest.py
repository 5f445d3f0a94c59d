"""Shared fixtures: synthetic scene builders and the reference prompt
instance reconstructed from its golden control-point values."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest

from scenekit import (AgentState, Lane, MapLayers, OrientedBox, Pose,
                      PredictionInstance, Trajectory)

DATA_DIR = Path(__file__).parent / "data"

HISTORY_TIMES = (-2.0, -1.5, -1.0, -0.5)

# Golden example prompt values: agent state, history rows, and the four
# control points of the current and outgoing lanes.
REF_STATE = {"category": "vehicle.car", "speed": 6.28, "acceleration": 1.26,
             "yaw_rate": 0.67}
REF_HISTORY = [
    [-2.0, 0.36, -11.63],
    [-1.5, 0.27, -8.8],
    [-1.0, 0.19, -5.97],
    [-0.5, 0.09, -3.15],
]
REF_CURRENT_CTRL = [[0.54, -19.47], [0.53, -6.59], [0.27, 6.32], [-0.23, 19.19]]
REF_OUTGOING_CTRL = [[-0.23, 19.19], [-0.71, 29.89], [-0.62, 40.59], [-0.98, 51.29]]


def reference_instance() -> PredictionInstance:
    """The committed reference instance whose lane polylines were solved so
    fit_lane reproduces the golden control-point rows (see
    generate_fixtures.py for the construction)."""
    from scenekit import load_split

    return load_split(DATA_DIR / "reference_split.json")[0]


@pytest.fixture
def reference() -> PredictionInstance:
    return reference_instance()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)


def synthetic_lane(rng: np.random.Generator, length: float,
                   start: np.ndarray | None = None,
                   heading: float | None = None) -> np.ndarray:
    """A gently curving lane polyline of roughly the requested arc length."""
    if start is None:
        start = np.array([rng.uniform(-2, 2), rng.uniform(-25, -15)])
    if heading is None:
        heading = math.pi / 2 + rng.uniform(-0.15, 0.15)
    step = 2.0
    curvature = rng.uniform(-0.004, 0.004)
    points = [np.asarray(start, dtype=float)]
    angle = heading
    for _ in range(int(length / step)):
        angle += curvature * step
        points.append(points[-1] + step * np.array([math.cos(angle), math.sin(angle)]))
    return np.array(points)


def synthetic_ground_truth(rng: np.random.Generator, speed: float) -> Trajectory:
    times = (np.arange(12) + 1) / 2.0
    omega = rng.uniform(-0.3, 0.3)
    if abs(omega) < 1e-6:
        base = np.column_stack([np.zeros(12), speed * times])
    else:
        base = np.column_stack([
            speed * (np.cos(omega * times) - 1.0) / omega,
            speed * np.sin(omega * times) / omega,
        ])
    noise = rng.normal(0.0, 0.3, size=(12, 2)).cumsum(axis=0) * 0.2
    return Trajectory(base + noise)


def synthetic_instance(rng: np.random.Generator, idx: int,
                       lane_length: float | None = None,
                       with_ground_truth: bool = True,
                       n_outgoing: int | None = None) -> PredictionInstance:
    speed = rng.uniform(0.5, 14.0)
    state = AgentState(
        category=rng.choice(["vehicle.car", "vehicle.truck", "vehicle.bus.rigid"]),
        speed=speed,
        acceleration=rng.uniform(-2.5, 2.5),
        yaw_rate=rng.uniform(-0.12, 0.12),
    )
    history = np.array([
        [t, rng.normal(0.0, 0.25), speed * t + rng.normal(0.0, 0.4)]
        for t in HISTORY_TIMES
    ])

    length = lane_length if lane_length is not None else rng.uniform(30.0, 80.0)
    current = synthetic_lane(rng, length)
    if n_outgoing is None:
        n_outgoing = int(rng.integers(0, 3))
    outgoing = []
    for _ in range(n_outgoing):
        outgoing.append(Lane(synthetic_lane(
            rng, rng.uniform(20.0, length),
            start=current[-1],
            heading=math.pi / 2 + rng.uniform(-0.4, 0.4)), "outgoing"))

    half = rng.uniform(8.0, 20.0)
    drivable = np.array([[-half, -half], [half, -half], [half, half], [-half, half]])
    drivable = drivable + rng.uniform(-2, 2, size=2)
    cw = rng.uniform(-10, 10, size=2)
    crosswalk = np.array([cw + [-2, -1], cw + [2, -1], cw + [2, 1], cw + [-2, 1]])
    boxes = tuple(
        OrientedBox(Pose(rng.uniform(-15, 15), rng.uniform(-5, 25),
                         rng.uniform(-math.pi, math.pi)),
                    rng.uniform(3.5, 6.0), rng.uniform(1.6, 2.4))
        for _ in range(int(rng.integers(0, 4)))
    )
    return PredictionInstance(
        instance_id=f"synth-{idx:04d}",
        agent=state,
        history=history,
        current_lane=Lane(current, "current"),
        outgoing_lanes=tuple(outgoing),
        map_layers=MapLayers((drivable,), (crosswalk,), boxes),
        ground_truth=synthetic_ground_truth(rng, speed) if with_ground_truth else None,
    )


def synthetic_split(seed: int, count: int, **kwargs) -> list[PredictionInstance]:
    rng = np.random.default_rng(seed)
    return [synthetic_instance(rng, i, **kwargs) for i in range(count)]


@pytest.fixture(scope="session")
def split50() -> list[PredictionInstance]:
    from scenekit import load_split

    return load_split(DATA_DIR / "synthetic_split_50.json")
