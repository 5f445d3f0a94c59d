"""Build scene split files from a :class:`SceneSource`.

One challenge token becomes one flat JSON record in the target agent's
frame (origin at the agent, +y along its heading).  The record layout is
the scene format consumed by downstream tooling; a transcribed copy of its
schema lives here so every record is validated before it is written and
the exporter never needs to import that tooling.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import jsonschema
import numpy as np

from .config import ExportConfig
from .frames import clip_polygon, heading_to_agent_frame, to_agent_frame, wrap_angle

_POINT = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_HISTORY_ROW = {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
_LANE = {
    "type": "array",
    "items": _POINT,
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

_KINEMATIC_FIELDS = ("speed", "acceleration", "yaw_rate")


class ExportError(Exception):
    """A built record violated the scene schema (exporter bug)."""


def _points(array: np.ndarray) -> list[list[float]]:
    return [[float(p[0]), float(p[1])] for p in array]


def _nearest_vertex(polyline: np.ndarray, x: float, y: float) -> tuple[int, float]:
    d = np.hypot(polyline[:, 0] - x, polyline[:, 1] - y)
    idx = int(np.argmin(d))
    return idx, float(d[idx])


def _segment_yaw(polyline: np.ndarray, vertex: int) -> float:
    # direction of the segment leaving the vertex; the last vertex reuses
    # the segment arriving at it
    j = vertex if vertex + 1 < len(polyline) else vertex - 1
    dx, dy = polyline[j + 1] - polyline[j]
    return math.atan2(dy, dx)


def _pick_current_lane(candidates: dict[str, np.ndarray], x: float, y: float, yaw: float) -> str | None:
    """Nearest candidate whose local direction is within 90 deg of the
    agent heading; anti-aligned lanes (oncoming traffic) never win on
    distance alone.  Distance ties break on token."""
    best: tuple[float, str] | None = None
    for token in sorted(candidates):
        polyline = candidates[token]
        vertex, dist = _nearest_vertex(polyline, x, y)
        if abs(wrap_angle(_segment_yaw(polyline, vertex) - yaw)) > math.pi / 2:
            continue
        if best is None or dist < best[0]:
            best = (dist, token)
    return None if best is None else best[1]


def build_records(config: ExportConfig, source) -> tuple[list[dict], dict]:
    """Export every challenge token of ``config.split``.

    Returns the records plus a summary of skips, warnings, and imputed
    kinematic fields.  Tokens are processed in sorted order so repeated
    exports are byte-identical.
    """
    step = 1.0 / config.sample_rate_hz
    skipped = {"short_future": 0}
    warnings = {"no_current_lane": 0}
    imputed = {field: 0 for field in _KINEMATIC_FIELDS}
    imputed_instances: dict[str, list[str]] = {field: [] for field in _KINEMATIC_FIELDS}

    records = []
    for token in sorted(source.challenge_tokens(config.split)):
        instance_token, _, sample_token = token.partition("_")
        if not instance_token or not sample_token:
            raise ValueError(f"malformed challenge token {token!r}")

        future = np.asarray(source.agent_future(instance_token, sample_token, config.horizon_seconds), dtype=float)
        if len(future) < config.future_points:
            skipped["short_future"] += 1
            continue
        future = future[: config.future_points]

        x, y, yaw = source.agent_pose(instance_token, sample_token)

        values = list(source.agent_kinematics(instance_token, sample_token))
        for i, field in enumerate(_KINEMATIC_FIELDS):
            if math.isnan(values[i]):
                values[i] = 0.0
                imputed[field] += 1
                imputed_instances[field].append(token)
        speed = max(values[0], 0.0)
        acceleration = values[1]
        yaw_rate = values[2] / (2.0 * math.pi)  # rad/s to turns/s

        history_world = np.asarray(source.agent_history(instance_token, sample_token, config.history_seconds), dtype=float)
        history_world = history_world[-config.history_points:]
        history_local = to_agent_frame(history_world, x, y, yaw)
        history = [
            [-step * (len(history_local) - i), float(p[0]), float(p[1])]
            for i, p in enumerate(history_local)
        ]

        candidates = {}
        for lane_token in source.lanes_in_radius(sample_token, x, y, config.lane_radius_m):
            polyline = np.asarray(source.lane_polyline(sample_token, lane_token), dtype=float)
            if len(polyline) >= 2:
                candidates[lane_token] = polyline

        current_token = _pick_current_lane(candidates, x, y, yaw)
        if current_token is None:
            warnings["no_current_lane"] += 1
            current_lane: list[list[float]] = []
            outgoing: list[list[list[float]]] = []
        else:
            current_lane = _points(to_agent_frame(candidates[current_token], x, y, yaw))
            successors = []
            for succ_token in source.outgoing_lanes(sample_token, current_token):
                polyline = np.asarray(source.lane_polyline(sample_token, succ_token), dtype=float)
                if len(polyline) < 2:
                    continue
                local = to_agent_frame(polyline, x, y, yaw)
                successors.append((float(local[0, 0]), succ_token, _points(local)))
            successors.sort(key=lambda item: (item[0], item[1]))
            outgoing = [item[2] for item in successors]

        half = config.map_half_extent_m
        polygons = source.map_polygons(sample_token, x, y, half)
        layers = {}
        for layer in ("drivable_area", "crosswalks"):
            rings = []
            for ring in polygons.get(layer, []):
                clipped = clip_polygon(to_agent_frame(np.asarray(ring, dtype=float), x, y, yaw), half)
                if len(clipped):
                    rings.append(_points(clipped))
            layers[layer] = rings

        others = []
        for box in source.nearby_boxes(sample_token):
            box_instance, bx, by, byaw, length, width = box
            if box_instance == instance_token:
                continue
            cx, cy = to_agent_frame(np.array([[bx, by]]), x, y, yaw)[0]
            if abs(cx) > half or abs(cy) > half:
                continue
            others.append([float(cx), float(cy),
                           float(heading_to_agent_frame(byaw, yaw)),
                           float(length), float(width)])

        record = {
            "instance_id": token,
            "category": source.agent_category(instance_token, sample_token),
            "speed": float(speed),
            "acceleration": float(acceleration),
            "yaw_rate": float(yaw_rate),
            "history": history,
            "current_lane": current_lane,
            "outgoing_lanes": outgoing,
            "drivable_area": layers["drivable_area"],
            "crosswalks": layers["crosswalks"],
            "other_agents": others,
            "ground_truth": _points(to_agent_frame(future, x, y, yaw)),
        }
        try:
            jsonschema.validate(record, SCENE_RECORD_SCHEMA)
        except jsonschema.ValidationError as exc:
            raise ExportError(f"record {token!r} violates the scene schema: {exc.message}") from exc
        records.append(record)

    summary = {
        "split": config.split,
        "instances": len(records),
        "skipped": skipped,
        "warnings": warnings,
        "imputed": imputed,
        "imputed_instances": {field: sorted(ids) for field, ids in imputed_instances.items()},
    }
    return records, summary


def export_split(config: ExportConfig, out_path: str | Path, source=None) -> dict:
    """Write the split to ``out_path`` and its summary next to it.

    The summary lands at ``<name>.summary.json``.  Returns the summary.
    """
    if source is None:
        from .source import DevkitSource

        source = DevkitSource(config)
    out = Path(out_path)
    records, summary = build_records(config, source)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(records, fh)
        fh.write("\n")
    summary_path = out.with_name(out.stem + ".summary.json")
    with open(summary_path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return summary
