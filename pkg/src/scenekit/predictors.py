"""Kinematic baselines, the physics oracle, and mode scoring.

Rollouts integrate in the agent frame from the origin heading +y.  The yaw
rate arrives in full turns per second (the split-format unit) and converts to
rad/s internally.  Deceleration clamps speed at zero; nothing reverses.

The oracles consult ground truth and are valid for evaluation only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np

from .coverset import TrajectorySet, delta
from .errors import InvalidInputError
from .scene import HORIZON_S, SAMPLE_RATE_HZ, AgentState, Trajectory
from .validation import check_finite

# Below this angular rate (rad/s) the arc equations lose precision to
# cancellation; the limit is a straight line anyway.
class KinematicModelKind(str, Enum):
    CONST_VELOCITY_YAW = "const_velocity_yaw"
    CONST_VELOCITY_YAW_RATE = "const_velocity_yaw_rate"
    CONST_ACCEL_YAW = "const_accel_yaw"
    CONST_ACCEL_YAW_RATE = "const_accel_yaw_rate"


@dataclass(frozen=True, eq=False)
class ModeScores:
    """Per-mode scores, higher is better."""

    scores: np.ndarray

    def __post_init__(self) -> None:
        arr = check_finite(self.scores, "scores")
        if arr.ndim != 1:
            raise InvalidInputError(f"scores must be 1-D, got shape {arr.shape}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "scores", arr)

    def ranking(self) -> np.ndarray:
        """Mode indices ordered by descending score; ties keep index order."""
        return np.argsort(-self.scores, kind="stable")


def _positions(v0: float, a: float, omega: float, times: np.ndarray) -> np.ndarray:
    """Closed-form agent-frame positions for speed v0 + a*t (clamped at 0)
    and constant angular rate omega.

    Written in terms of the even functions sinc(z), (1-cos z)/z^2,
    (sin z - z cos z)/z^3 and (cos z + z sin z - 1)/z^2 of z = omega*t, with
    series fallbacks near zero: the raw closed forms cancel catastrophically
    for small omega, and a hard straight-line cutoff leaves a gap where
    neither branch is accurate.
    """
    if a < 0:
        t = np.minimum(np.asarray(times, dtype=float), v0 / -a)
    else:
        t = np.asarray(times, dtype=float)
    z = omega * t
    small = np.abs(z) < 1e-2
    zs = np.where(small, 1.0, z)
    z2 = z * z
    z4 = z2 * z2
    cos_z, sin_z = np.cos(zs), np.sin(zs)
    sinc = np.where(small, 1.0 - z2 / 6.0 + z4 / 120.0, sin_z / zs)
    vers = np.where(small, 0.5 - z2 / 24.0 + z4 / 720.0,
                    (1.0 - cos_z) / (zs * zs))
    lever = np.where(small, 1.0 / 3.0 - z2 / 30.0 + z4 / 840.0,
                     (sin_z - zs * cos_z) / (zs * zs * zs))
    sweep = np.where(small, 0.5 - z2 / 8.0 + z4 / 144.0,
                     (cos_z + zs * sin_z - 1.0) / (zs * zs))
    x = -(v0 * t) * z * vers - (a * t * t) * z * lever
    y = (v0 * t) * sinc + (a * t * t) * sweep
    return np.column_stack([x, y])


def rollout(kind: KinematicModelKind | str, agent: AgentState,
            horizon: float = HORIZON_S, rate: float = SAMPLE_RATE_HZ) -> Trajectory:
    """Integrate one kinematic model to a sampled trajectory."""
    kind = KinematicModelKind(kind)
    count = int(round(rate * horizon))
    times = (np.arange(count) + 1) / rate
    v0 = agent.speed
    accel = agent.acceleration if kind in (
        KinematicModelKind.CONST_ACCEL_YAW, KinematicModelKind.CONST_ACCEL_YAW_RATE) else 0.0
    omega = agent.yaw_rate_rad if kind in (
        KinematicModelKind.CONST_VELOCITY_YAW_RATE, KinematicModelKind.CONST_ACCEL_YAW_RATE) else 0.0
    points = _positions(v0, accel, omega, times)
    return Trajectory(points, rate, horizon)


def average_displacement(a: Any, b: Any) -> float:
    """Mean pointwise Euclidean distance between two equal-length trajectories."""
    pa = a.points if isinstance(a, Trajectory) else np.asarray(a, dtype=float)
    pb = b.points if isinstance(b, Trajectory) else np.asarray(b, dtype=float)
    if pa.shape != pb.shape:
        raise InvalidInputError(f"trajectory shapes differ: {pa.shape} vs {pb.shape}")
    diff = pa - pb
    return float(np.hypot(diff[:, 0], diff[:, 1]).mean())


def physics_oracle(agent: AgentState, ground_truth: Trajectory | None) -> Trajectory:
    """The rollout with the lowest ADE against ground truth.

    Ground truth is an input, so this is an evaluation-time upper bound on
    the kinematic family, not a usable predictor.
    """
    if ground_truth is None:
        raise InvalidInputError("physics oracle requires ground truth")
    best: Trajectory | None = None
    best_ade = math.inf
    for kind in KinematicModelKind:
        candidate = rollout(kind, agent, ground_truth.horizon, ground_truth.sample_rate)
        ade = average_displacement(candidate, ground_truth)
        if ade < best_ade:
            best, best_ade = candidate, ade
    assert best is not None
    return best


def score_modes_nearest_oracle(ground_truth: Trajectory | None,
                               modes: TrajectorySet) -> ModeScores:
    """Score each mode by -delta to ground truth: the argmax is the best any
    classifier over this mode set could pick."""
    if ground_truth is None:
        raise InvalidInputError("nearest-mode oracle requires ground truth")
    if len(modes) == 0:
        raise InvalidInputError("mode set is empty")
    return ModeScores(np.array([-delta(ground_truth, m) for m in modes.trajectories]))


def score_modes_physics(agent: AgentState, modes: TrajectorySet,
                        kind: KinematicModelKind | str) -> ModeScores:
    """Score each mode by -delta to the kinematic rollout.

    For baseline metrics the raw rollout itself serves as the prediction;
    snapping to the nearest mode is only for classifier-style consumers.
    """
    if len(modes) == 0:
        raise InvalidInputError("mode set is empty")
    ref = rollout(kind, agent, modes.trajectories[0].horizon, modes.trajectories[0].sample_rate)
    return ModeScores(np.array([-delta(ref, m) for m in modes.trajectories]))
