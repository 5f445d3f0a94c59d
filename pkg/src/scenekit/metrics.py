"""Displacement metrics over ranked trajectory modes.

minADE_k / minFDE_k take the best of the k highest-ranked modes; the miss
rate counts instances where every top-k mode strays more than the threshold
from ground truth at some timestep (maximum pointwise distance, the devkit
convention).  ``k`` beyond the mode count falls back to all modes, so a
single-mode baseline reports equal columns for every k.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import InvalidInputError, ReconciliationError, UndefinedRateError
from .scene import PredictionInstance, Trajectory
from .validation import check_scalar

DEFAULT_KS = (1, 5, 10)
MISS_THRESHOLD_M = 2.0


def _as_traj(traj: Any, name: str) -> np.ndarray:
    pts = traj.points if isinstance(traj, Trajectory) else np.asarray(traj, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InvalidInputError(f"{name} must have shape (T, 2), got {pts.shape}")
    return pts


def _as_modes(modes: Any) -> np.ndarray:
    if isinstance(modes, Trajectory):
        return modes.points[None]
    if isinstance(modes, (list, tuple)):
        if not modes:
            raise InvalidInputError("ranked modes must be non-empty")
        return np.stack([_as_traj(m, "mode") for m in modes])
    arr = np.asarray(modes, dtype=float)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] == 0:
        raise InvalidInputError(f"ranked modes must have shape (m, T, 2), got {arr.shape}")
    return arr


def _check_k(k: Any) -> int:
    k = int(k)
    if k < 1:
        raise InvalidInputError(f"k must be >= 1, got {k}")
    return k


def _pointwise_distances(gt: np.ndarray, modes: np.ndarray) -> np.ndarray:
    if modes.shape[1:] != gt.shape:
        raise InvalidInputError(
            f"mode shape {modes.shape[1:]} does not match ground truth {gt.shape}")
    diff = modes - gt[None]
    return np.hypot(diff[:, :, 0], diff[:, :, 1])


def min_ade_k(ground_truth: Any, ranked_modes: Any, k: int) -> float:
    """Minimum mean displacement over the top-k ranked modes."""
    k = _check_k(k)
    gt = _as_traj(ground_truth, "ground truth")
    modes = _as_modes(ranked_modes)[:k]
    dists = _pointwise_distances(gt, modes)
    return float(dists.mean(axis=1).min())


def min_fde_k(ground_truth: Any, ranked_modes: Any, k: int) -> float:
    """Minimum final-point displacement over the top-k ranked modes."""
    k = _check_k(k)
    gt = _as_traj(ground_truth, "ground truth")
    modes = _as_modes(ranked_modes)[:k]
    dists = _pointwise_distances(gt, modes)
    return float(dists[:, -1].min())


def is_miss(ground_truth: Any, ranked_modes: Any, k: int,
            threshold: float = MISS_THRESHOLD_M) -> bool:
    """True when every top-k mode exceeds the threshold at some timestep."""
    k = _check_k(k)
    gt = _as_traj(ground_truth, "ground truth")
    modes = _as_modes(ranked_modes)[:k]
    dists = _pointwise_distances(gt, modes)
    return bool((dists.max(axis=1) > threshold).all())


def miss_rate_k(dataset: Iterable[tuple[Any, Any]], k: int,
                threshold: float = MISS_THRESHOLD_M) -> float:
    """Fraction of (ground_truth, ranked_modes) pairs that are misses."""
    threshold = check_scalar(threshold, "threshold")
    if threshold <= 0:
        raise InvalidInputError("threshold must be positive")
    total = 0
    misses = 0
    for gt, modes in dataset:
        total += 1
        misses += is_miss(gt, modes, k, threshold)
    if total == 0:
        raise UndefinedRateError("miss rate over an empty dataset is undefined")
    return misses / total


@dataclass(frozen=True)
class MetricsReport:
    per_k: dict[int, dict[str, float]]
    num_instances: int

    def to_json(self) -> dict:
        return {
            "num_instances": self.num_instances,
            "per_k": {str(k): dict(v) for k, v in sorted(self.per_k.items())},
        }

    def format_table(self) -> str:
        """Aligned text table, one row, columns as in the standard results
        layout: minADE then MissRate per k, then minFDE_1."""
        ks = sorted(self.per_k)
        headers = ([f"minADE_{k}" for k in ks]
                   + [f"MissRate_{k}" for k in ks]
                   + ["minFDE_1"])
        values = ([f"{self.per_k[k]['min_ade']:.2f}" for k in ks]
                  + [f"{self.per_k[k]['miss_rate']:.2f}" for k in ks]
                  + [f"{self.per_k[min(ks)]['min_fde']:.2f}"])
        widths = [max(len(h), len(v)) for h, v in zip(headers, values)]
        head = "  ".join(h.rjust(w) for h, w in zip(headers, widths))
        row = "  ".join(v.rjust(w) for v, w in zip(values, widths))
        return head + "\n" + row


def evaluate_pairs(pairs: Sequence[tuple[Any, Any]], ks: Sequence[int] = DEFAULT_KS,
                   threshold: float = MISS_THRESHOLD_M) -> MetricsReport:
    """Aggregate all metrics over (ground_truth, ranked_modes) pairs."""
    if not pairs:
        raise UndefinedRateError("cannot evaluate an empty dataset")
    per_k: dict[int, dict[str, float]] = {}
    for k in ks:
        ades = [min_ade_k(gt, modes, k) for gt, modes in pairs]
        fdes = [min_fde_k(gt, modes, k) for gt, modes in pairs]
        rate = miss_rate_k(pairs, k, threshold)
        per_k[_check_k(k)] = {
            "min_ade": float(np.mean(ades)),
            "min_fde": float(np.mean(fdes)),
            "miss_rate": rate,
        }
    return MetricsReport(per_k, len(pairs))


# ---------------------------------------------------------------------------
# Predictions file handling


def load_predictions(path: str | Path) -> dict:
    with open(path) as fh:
        payload = json.load(fh)
    if not isinstance(payload, dict) or "records" not in payload:
        raise InvalidInputError("predictions file must be an object with a 'records' array")
    return payload


def _ranked_modes_for_record(record: dict, modes: np.ndarray | None) -> np.ndarray:
    iid = record.get("instance_id")
    if "trajectory" in record:
        return _as_modes(np.asarray(record["trajectory"], dtype=float))
    if "ranking" in record:
        if modes is None:
            raise InvalidInputError(
                f"instance {iid!r}: ranking given but the predictions file has no modes")
        ranking = np.asarray(record["ranking"], dtype=int)
        if ranking.ndim != 1 or len(ranking) == 0:
            raise InvalidInputError(f"instance {iid!r}: ranking must be a non-empty index list")
        if ranking.min() < 0 or ranking.max() >= len(modes):
            raise InvalidInputError(f"instance {iid!r}: ranking indexes outside the mode set")
        return modes[ranking]
    raise InvalidInputError(f"instance {iid!r}: record needs 'trajectory' or 'ranking'")


def evaluate_predictions(predictions: dict, instances: Sequence[PredictionInstance],
                         ks: Sequence[int] = DEFAULT_KS,
                         threshold: float = MISS_THRESHOLD_M) -> MetricsReport:
    """Reconcile a predictions payload against a split and aggregate metrics.

    Every instance with ground truth needs exactly one prediction record and
    vice versa; anything else raises with the offending ids listed.
    """
    records = predictions["records"]
    seen: set[str] = set()
    for rec in records:
        iid = rec.get("instance_id")
        if not isinstance(iid, str):
            raise InvalidInputError("prediction record without a string instance_id")
        if iid in seen:
            raise InvalidInputError(f"duplicate prediction for instance {iid!r}")
        seen.add(iid)
    evaluable = {inst.instance_id: inst for inst in instances if inst.ground_truth is not None}
    missing = sorted(set(evaluable) - seen)
    unexpected = sorted(seen - set(evaluable))
    if missing or unexpected:
        raise ReconciliationError(missing, unexpected)

    modes = predictions.get("modes")
    modes_arr = None
    if modes is not None:
        modes_arr = np.asarray(modes, dtype=float)
        if modes_arr.ndim != 3 or modes_arr.shape[2] != 2:
            raise InvalidInputError("predictions 'modes' must have shape (m, T, 2)")
    pairs = [
        (evaluable[rec["instance_id"]].ground_truth,
         _ranked_modes_for_record(rec, modes_arr))
        for rec in records
    ]
    return evaluate_pairs(pairs, ks, threshold)
