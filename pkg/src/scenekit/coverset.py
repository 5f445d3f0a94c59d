"""Fixed candidate trajectory sets built by greedy coverage.

The distance between two trajectories is the maximum pointwise Euclidean
distance over time.  A candidate set covers a base set at radius epsilon when
every base trajectory lies strictly within epsilon of some candidate.  The
greedy builder repeatedly picks the trajectory covering the most not yet
covered ones, which carries the usual (1 + ln n) set-cover guarantee.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import InvalidInputError
from .scene import HORIZON_S, SAMPLE_RATE_HZ, Trajectory
from .validation import as_point_stack, check_scalar

# Rows processed per chunk when building pairwise distances; bounds peak
# memory at roughly chunk * n * T * 16 bytes.
_CHUNK = 256


@dataclass(frozen=True, eq=False)
class TrajectorySet:
    """An ordered set of same-shape trajectories, optionally with the
    coverage radius it was built for."""

    trajectories: tuple[Trajectory, ...]
    epsilon: float | None = None

    def __post_init__(self) -> None:
        trajs = tuple(self.trajectories)
        if self.epsilon is not None:
            eps = check_scalar(self.epsilon, "epsilon")
            if eps <= 0:
                raise InvalidInputError("epsilon must be positive")
            object.__setattr__(self, "epsilon", eps)
        for traj in trajs:
            if (len(traj) != len(trajs[0])
                    or traj.sample_rate != trajs[0].sample_rate
                    or traj.horizon != trajs[0].horizon):
                raise InvalidInputError("trajectories in a set must share shape and sampling")
        object.__setattr__(self, "trajectories", trajs)

    def __len__(self) -> int:
        return len(self.trajectories)

    def as_array(self) -> np.ndarray:
        """Stack into an (n, T, 2) array."""
        if not self.trajectories:
            return np.zeros((0, 0, 2))
        return np.stack([t.points for t in self.trajectories])

    @classmethod
    def from_array(cls, stack: Any, sample_rate: float = SAMPLE_RATE_HZ,
                   horizon: float = HORIZON_S, epsilon: float | None = None) -> "TrajectorySet":
        arr = as_point_stack(stack)
        trajs = tuple(Trajectory(row, sample_rate, horizon) for row in arr)
        return cls(trajs, epsilon)


@dataclass(frozen=True)
class CoverReport:
    """Outcome of certifying a candidate set against a base set."""

    is_cover: bool
    worst_uncovered_distance: float
    cover_size: int


def _as_stack(trajectories: Any) -> np.ndarray:
    if isinstance(trajectories, TrajectorySet):
        return trajectories.as_array()
    if isinstance(trajectories, Trajectory):
        return trajectories.points[None, :, :]
    if (isinstance(trajectories, (list, tuple)) and trajectories
            and isinstance(trajectories[0], Trajectory)):
        return np.stack([t.points for t in trajectories])
    arr = np.asarray(trajectories, dtype=float)
    if arr.ndim == 2:
        arr = arr[None, :, :]
    return as_point_stack(arr)


def delta(a: Any, b: Any) -> float:
    """Maximum pointwise Euclidean distance between two trajectories."""
    pa = _as_stack(a)[0]
    pb = _as_stack(b)[0]
    if pa.shape != pb.shape:
        raise InvalidInputError(
            f"trajectories must have equal length, got {pa.shape[0]} and {pb.shape[0]}")
    diff = pa - pb
    return float(np.hypot(diff[:, 0], diff[:, 1]).max())


def delta_matrix(rows: Any, cols: Any) -> np.ndarray:
    """Pairwise delta distances, shape (len(rows), len(cols))."""
    ra = _as_stack(rows)
    ca = _as_stack(cols)
    if ra.shape[1:] != ca.shape[1:]:
        raise InvalidInputError("row and column trajectories must share shape")
    out = np.empty((len(ra), len(ca)))
    for start in range(0, len(ra), _CHUNK):
        block = ra[start:start + _CHUNK]
        diff = block[:, None, :, :] - ca[None, :, :, :]
        out[start:start + _CHUNK] = np.sqrt((diff * diff).sum(axis=3)).max(axis=2)
    return out


def greedy_cover_indices(base: Any, epsilon: float) -> list[int]:
    """Indices into ``base`` picked by greedy max-coverage, in pick order.

    Ties go to the lowest index.  Coverage is strict: a trajectory counts as
    covered only when its delta distance is strictly below epsilon.
    """
    epsilon = check_scalar(epsilon, "epsilon")
    if epsilon <= 0:
        raise InvalidInputError("epsilon must be positive")
    arr = _as_stack(base)
    n = len(arr)
    if n == 0:
        return []
    covers = delta_matrix(arr, arr) < epsilon
    covered = np.zeros(n, dtype=bool)
    counts = covers.sum(axis=1)
    picked: list[int] = []
    while not covered.all():
        best = int(np.argmax(counts))
        picked.append(best)
        newly = covers[best] & ~covered
        covered |= newly
        counts -= covers[:, newly].sum(axis=1)
    return picked


def greedy_cover(base: TrajectorySet, epsilon: float) -> TrajectorySet:
    """Greedy cover of ``base`` at radius ``epsilon``, a subset of ``base``."""
    picked = greedy_cover_indices(base, epsilon)
    return TrajectorySet(tuple(base.trajectories[i] for i in picked), epsilon)


def is_cover(candidate: Any, base: Any, epsilon: float) -> CoverReport:
    """Certify whether every base trajectory lies strictly within epsilon of
    some candidate."""
    epsilon = check_scalar(epsilon, "epsilon")
    if epsilon <= 0:
        raise InvalidInputError("epsilon must be positive")
    cand = _as_stack(candidate)
    base_arr = _as_stack(base)
    if len(base_arr) == 0:
        return CoverReport(True, 0.0, len(cand))
    if len(cand) == 0:
        return CoverReport(False, float("inf"), 0)
    nearest = delta_matrix(base_arr, cand).min(axis=1)
    worst = float(nearest.max())
    return CoverReport(worst < epsilon, worst, len(cand))


# ---------------------------------------------------------------------------
# Cover set file format


def save_coverset(path: str | Path, cover: TrajectorySet, base_size: int) -> None:
    if cover.epsilon is None:
        raise InvalidInputError("cover set must carry the epsilon it was built for")
    payload = {
        "epsilon": cover.epsilon,
        "delta": "max_pointwise_euclidean",
        "base_size": int(base_size),
        "cover_size": len(cover),
        "sample_rate": cover.trajectories[0].sample_rate if len(cover) else SAMPLE_RATE_HZ,
        "horizon": cover.trajectories[0].horizon if len(cover) else HORIZON_S,
        "trajectories": [t.points.tolist() for t in cover.trajectories],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_coverset(path: str | Path) -> TrajectorySet:
    with open(path) as fh:
        payload = json.load(fh)
    for key in ("epsilon", "delta", "base_size", "cover_size", "trajectories"):
        if key not in payload:
            raise InvalidInputError(f"cover set file is missing field {key!r}")
    if payload["delta"] != "max_pointwise_euclidean":
        raise InvalidInputError(f"unsupported delta metric {payload['delta']!r}")
    trajs = tuple(
        Trajectory(p, payload.get("sample_rate", SAMPLE_RATE_HZ),
                   payload.get("horizon", HORIZON_S))
        for p in payload["trajectories"]
    )
    ts = TrajectorySet(trajs, payload["epsilon"])
    if len(ts) != payload["cover_size"]:
        raise InvalidInputError("cover_size header does not match trajectory count")
    return ts
