"""Hand-built fake data source for exporter tests.

The fake describes one small world: an agent at (100, 50) with yaw
0.3 rad, driving straight.  Geometry is authored in the agent frame and
mapped to world coordinates with :func:`from_agent`, so tests can state
expected exported values directly.

Scenario per challenge token:
  ins0_smp4  future too short (9 points), must be skipped
  ins1_smp1  fully populated scene
  ins2_smp2  NaN acceleration and yaw rate, slightly negative speed
  ins3_smp3  no lanes within the search radius
"""

from __future__ import annotations

import math

import numpy as np

YAW = 0.3
AGENT_XY = (100.0, 50.0)

LANE_A_LOCAL = [[0.5, -5.0], [0.5, 0.0], [0.5, 5.0]]   # aligned, 0.5 m right
LANE_B_LOCAL = [[0.0, 5.0], [0.0, 0.0], [0.0, -5.0]]   # through the agent, oncoming
LANE_L_LOCAL = [[-2.0, 10.0], [-2.0, 20.0]]
LANE_R_LOCAL = [[2.0, 10.0], [2.0, 20.0]]


def from_agent(points) -> np.ndarray:
    """Inverse of the exporter's frame change, for authoring fixtures."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    angle = YAW - math.pi / 2.0
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    return pts @ rot.T + np.array(AGENT_XY)


class FakeSource:
    """In-memory SceneSource implementing the hand-built world above."""

    def __init__(self) -> None:
        self.lanes = {
            "lane_a": from_agent(LANE_A_LOCAL),
            "lane_b": from_agent(LANE_B_LOCAL),
            "lane_l": from_agent(LANE_L_LOCAL),
            "lane_r": from_agent(LANE_R_LOCAL),
            "lane_s": from_agent([[0.0, 30.0]]),  # degenerate, 1 point
        }

    def challenge_tokens(self, split):
        assert split in ("train", "train_val", "val")
        # deliberately unsorted; the exporter must sort
        return ["ins2_smp2", "ins0_smp4", "ins3_smp3", "ins1_smp1"]

    def agent_category(self, instance, sample):
        return {
            "ins1": "vehicle.car",
            "ins2": "vehicle.truck",
            "ins3": "human.pedestrian.adult",
            "ins0": "vehicle.car",
        }[instance]

    def agent_pose(self, instance, sample):
        return (*AGENT_XY, YAW)

    def agent_kinematics(self, instance, sample):
        return {
            "ins1": (2.0, 0.5, 0.1 * 2.0 * math.pi),
            "ins2": (-0.5, math.nan, math.nan),
            "ins3": (3.0, 0.0, 0.0),
            "ins0": (1.0, 0.0, 0.0),
        }[instance]

    def agent_history(self, instance, sample, seconds):
        # oldest first, 1 m spacing straight behind the agent
        return from_agent([[0.0, -4.0], [0.0, -3.0], [0.0, -2.0], [0.0, -1.0]])

    def agent_future(self, instance, sample, seconds):
        steps = {"ins1": 14, "ins2": 12, "ins3": 12, "ins0": 9}[instance]
        return from_agent([[0.0, 2.0 * (k + 1)] for k in range(steps)])

    def nearby_boxes(self, sample):
        if sample != "smp1":
            return []
        x, y = AGENT_XY
        neighbor = from_agent([[3.0, 10.0]])[0]
        far = from_agent([[0.0, 45.0]])[0]
        walker = from_agent([[-5.0, 5.0]])[0]
        return [
            ("ins1", x, y, YAW, 4.0, 1.8),  # the target itself
            ("other1", neighbor[0], neighbor[1], YAW + 0.5, 4.5, 2.0),
            ("other2", far[0], far[1], YAW, 4.5, 2.0),  # outside the box
            ("ped1", walker[0], walker[1], YAW - math.pi / 2.0, 0.8, 0.6),
        ]

    def lanes_in_radius(self, sample, x, y, radius):
        if sample == "smp3":
            return []
        return ["lane_b", "lane_a"]

    def lane_polyline(self, sample, token):
        return self.lanes[token]

    def outgoing_lanes(self, sample, token):
        assert token == "lane_a"
        return ["lane_r", "lane_s", "lane_l"]

    def map_polygons(self, sample, x, y, half_extent):
        return {
            "drivable_area": [
                from_agent([[-40.0, -40.0], [40.0, -40.0], [40.0, 50.0], [-40.0, 50.0]]),
                from_agent([[35.0, -5.0], [45.0, -5.0], [45.0, 5.0], [35.0, 5.0]]),
            ],
            "crosswalks": [
                from_agent([[2.0, 8.0], [6.0, 8.0], [6.0, 12.0], [2.0, 12.0]]),
            ],
        }
