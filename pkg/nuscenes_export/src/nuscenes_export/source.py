"""Data-source seam between the exporter and the nuScenes devkit.

The exporter only talks to the small :class:`SceneSource` protocol, so
tests drive it with fakes and the devkit stays an optional dependency.
:class:`DevkitSource` is the real binding; it imports nuscenes lazily and
normalizes devkit quirks (annotation ordering, map lookup per city) so the
protocol stays simple.

All positions returned by a source are world-frame meters; yaw is radians
counterclockwise from +x.
"""

from __future__ import annotations

from typing import Protocol, Sequence

import numpy as np

from .config import ExportConfig


class SceneSource(Protocol):
    def challenge_tokens(self, split: str) -> Sequence[str]:
        """Prediction-challenge tokens, '<instance_token>_<sample_token>'."""

    def agent_category(self, instance_token: str, sample_token: str) -> str: ...

    def agent_pose(self, instance_token: str, sample_token: str) -> tuple[float, float, float]:
        """(x, y, yaw) of the target agent at the sample."""

    def agent_kinematics(self, instance_token: str, sample_token: str) -> tuple[float, float, float]:
        """(speed m/s, acceleration m/s^2, yaw rate rad/s); NaN when unknown."""

    def agent_history(self, instance_token: str, sample_token: str, seconds: float) -> np.ndarray:
        """(M, 2) past positions, oldest first, excluding the current sample."""

    def agent_future(self, instance_token: str, sample_token: str, seconds: float) -> np.ndarray:
        """(K, 2) future positions in chronological order."""

    def nearby_boxes(self, sample_token: str) -> Sequence[tuple[str, float, float, float, float, float]]:
        """(instance_token, x, y, yaw, length, width) for every annotated
        vehicle or pedestrian in the sample, the target included."""

    def lanes_in_radius(self, sample_token: str, x: float, y: float, radius: float) -> Sequence[str]: ...

    def lane_polyline(self, sample_token: str, lane_token: str) -> np.ndarray:
        """(L, 2) lane centerline discretized along arc length."""

    def outgoing_lanes(self, sample_token: str, lane_token: str) -> Sequence[str]: ...

    def map_polygons(self, sample_token: str, x: float, y: float, half_extent: float) -> dict[str, list[np.ndarray]]:
        """Rings near (x, y) as {'drivable_area': [...], 'crosswalks': [...]};
        may over-approximate the extent, the exporter clips exactly."""


class DevkitSource:
    """SceneSource over a local nuScenes installation.

    Requires the ``devkit`` extra (nuscenes-devkit) and the map expansion
    pack under the dataset root.
    """

    _BOX_CATEGORIES = ("vehicle.", "human.")

    def __init__(self, config: ExportConfig, version: str = "v1.0-trainval") -> None:
        try:
            from nuscenes import NuScenes
            from nuscenes.prediction import PredictHelper
        except ImportError as exc:  # pragma: no cover - needs the devkit
            raise RuntimeError(
                "nuscenes-devkit is not installed; pip install 'nuscenes-export[devkit]'"
            ) from exc
        self._root = str(config.dataset_root)
        self._nusc = NuScenes(version=version, dataroot=self._root, verbose=False)
        self._helper = PredictHelper(self._nusc)
        self._maps: dict[str, object] = {}

    # -- dataset ----------------------------------------------------------

    def challenge_tokens(self, split: str) -> Sequence[str]:
        from nuscenes.eval.prediction.splits import get_prediction_challenge_split

        return get_prediction_challenge_split(split, dataroot=self._root)

    def _annotation(self, instance_token: str, sample_token: str) -> dict:
        return self._helper.get_sample_annotation(instance_token, sample_token)

    def _yaw(self, rotation: Sequence[float]) -> float:
        from nuscenes.eval.common.utils import quaternion_yaw
        from pyquaternion import Quaternion

        return float(quaternion_yaw(Quaternion(rotation)))

    def agent_category(self, instance_token: str, sample_token: str) -> str:
        return self._annotation(instance_token, sample_token)["category_name"]

    def agent_pose(self, instance_token: str, sample_token: str) -> tuple[float, float, float]:
        ann = self._annotation(instance_token, sample_token)
        x, y = ann["translation"][0], ann["translation"][1]
        return float(x), float(y), self._yaw(ann["rotation"])

    def agent_kinematics(self, instance_token: str, sample_token: str) -> tuple[float, float, float]:
        h = self._helper
        return (float(h.get_velocity_for_agent(instance_token, sample_token)),
                float(h.get_acceleration_for_agent(instance_token, sample_token)),
                float(h.get_heading_change_rate_for_agent(instance_token, sample_token)))

    def _ordered_xy(self, annotations: Sequence[dict]) -> np.ndarray:
        # the helper's ordering conventions differ between past and future;
        # sorting by sample timestamp makes both chronological
        stamped = sorted(
            annotations,
            key=lambda a: self._nusc.get("sample", a["sample_token"])["timestamp"],
        )
        if not stamped:
            return np.empty((0, 2), dtype=float)
        return np.array([a["translation"][:2] for a in stamped], dtype=float)

    def agent_history(self, instance_token: str, sample_token: str, seconds: float) -> np.ndarray:
        anns = self._helper.get_past_for_agent(
            instance_token, sample_token, seconds=seconds,
            in_agent_frame=False, just_xy=False)
        return self._ordered_xy(anns)

    def agent_future(self, instance_token: str, sample_token: str, seconds: float) -> np.ndarray:
        anns = self._helper.get_future_for_agent(
            instance_token, sample_token, seconds=seconds,
            in_agent_frame=False, just_xy=False)
        return self._ordered_xy(anns)

    def nearby_boxes(self, sample_token: str) -> Sequence[tuple[str, float, float, float, float, float]]:
        sample = self._nusc.get("sample", sample_token)
        boxes = []
        for ann_token in sample["anns"]:
            ann = self._nusc.get("sample_annotation", ann_token)
            if not ann["category_name"].startswith(self._BOX_CATEGORIES):
                continue
            width, length = ann["size"][0], ann["size"][1]
            boxes.append((ann["instance_token"],
                          float(ann["translation"][0]), float(ann["translation"][1]),
                          self._yaw(ann["rotation"]), float(length), float(width)))
        return boxes

    # -- map --------------------------------------------------------------

    def _map(self, sample_token: str):
        from nuscenes.map_expansion.map_api import NuScenesMap

        sample = self._nusc.get("sample", sample_token)
        scene = self._nusc.get("scene", sample["scene_token"])
        location = self._nusc.get("log", scene["log_token"])["location"]
        if location not in self._maps:
            self._maps[location] = NuScenesMap(dataroot=self._root, map_name=location)
        return self._maps[location]

    def lanes_in_radius(self, sample_token: str, x: float, y: float, radius: float) -> Sequence[str]:
        records = self._map(sample_token).get_records_in_radius(
            x, y, radius, ["lane", "lane_connector"])
        return sorted(records["lane"]) + sorted(records["lane_connector"])

    def lane_polyline(self, sample_token: str, lane_token: str) -> np.ndarray:
        from nuscenes.map_expansion import arcline_path_utils

        path = self._map(sample_token).get_arcline_path(lane_token)
        poses = arcline_path_utils.discretize_lane(path, resolution_meters=1.0)
        return np.array([[p[0], p[1]] for p in poses], dtype=float)

    def outgoing_lanes(self, sample_token: str, lane_token: str) -> Sequence[str]:
        return sorted(self._map(sample_token).get_outgoing_lane_ids(lane_token))

    def map_polygons(self, sample_token: str, x: float, y: float, half_extent: float) -> dict[str, list[np.ndarray]]:
        nmap = self._map(sample_token)
        # circumscribe the rotated agent-frame square, clipping happens later
        reach = half_extent * 1.5
        patch = (x - reach, y - reach, x + reach, y + reach)
        found = nmap.get_records_in_patch(
            patch, ["drivable_area", "ped_crossing"], mode="intersect")

        def ring(polygon_token: str) -> np.ndarray:
            poly = nmap.extract_polygon(polygon_token)
            pts = np.array(poly.exterior.coords, dtype=float)[:, :2]
            # exterior coords repeat the first vertex at the end
            return pts[:-1] if len(pts) > 1 and np.array_equal(pts[0], pts[-1]) else pts

        drivable = []
        for token in sorted(found["drivable_area"]):
            record = nmap.get("drivable_area", token)
            drivable.extend(ring(t) for t in record["polygon_tokens"])
        crosswalks = []
        for token in sorted(found["ped_crossing"]):
            record = nmap.get("ped_crossing", token)
            crosswalks.append(ring(record["polygon_token"]))
        return {"drivable_area": drivable, "crosswalks": crosswalks}
