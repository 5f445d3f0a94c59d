import math

import numpy as np
import pytest

from nuscenes_export.frames import clip_polygon, heading_to_agent_frame, to_agent_frame, wrap_angle


def shoelace(ring: np.ndarray) -> float:
    x, y = ring[:, 0], ring[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


class TestToAgentFrame:
    def test_point_ahead_maps_to_plus_y(self):
        # agent at (10, 0) facing +x; one meter ahead is (11, 0)
        out = to_agent_frame(np.array([[11.0, 0.0]]), 10.0, 0.0, 0.0)
        assert np.allclose(out, [[0.0, 1.0]])

    def test_point_left_maps_to_minus_x(self):
        out = to_agent_frame(np.array([[10.0, 1.0]]), 10.0, 0.0, 0.0)
        assert np.allclose(out, [[-1.0, 0.0]])

    def test_agent_position_maps_to_origin(self):
        out = to_agent_frame(np.array([[3.0, -7.0]]), 3.0, -7.0, 1.234)
        assert np.allclose(out, [[0.0, 0.0]], atol=1e-12)

    def test_preserves_pairwise_distances(self):
        rng = np.random.default_rng(7)
        pts = rng.normal(size=(20, 2)) * 30.0
        out = to_agent_frame(pts, 12.5, -3.0, 2.1)
        d_in = np.linalg.norm(pts[:, None] - pts[None, :], axis=-1)
        d_out = np.linalg.norm(out[:, None] - out[None, :], axis=-1)
        assert np.allclose(d_in, d_out)

    def test_empty_input(self):
        out = to_agent_frame(np.empty((0, 2)), 1.0, 2.0, 0.5)
        assert out.shape == (0, 2)


class TestHeadings:
    def test_own_heading_maps_to_half_pi(self):
        for yaw in (0.0, 0.3, -2.0, 3.0):
            assert heading_to_agent_frame(yaw, yaw) == pytest.approx(math.pi / 2.0)

    def test_oncoming_maps_to_minus_half_pi(self):
        assert heading_to_agent_frame(math.pi, 0.0) == pytest.approx(-math.pi / 2.0)

    def test_result_in_half_open_interval(self):
        rng = np.random.default_rng(11)
        for heading, yaw in rng.uniform(-10.0, 10.0, size=(200, 2)):
            out = heading_to_agent_frame(float(heading), float(yaw))
            assert -math.pi < out <= math.pi

    def test_wrap_angle_identity_inside_interval(self):
        assert wrap_angle(0.5) == pytest.approx(0.5)
        assert wrap_angle(-3.0) == pytest.approx(-3.0)

    def test_wrap_angle_boundaries(self):
        assert wrap_angle(math.pi) == pytest.approx(math.pi)
        assert wrap_angle(-math.pi) == pytest.approx(math.pi)
        assert wrap_angle(3.0 * math.pi) == pytest.approx(math.pi)
        assert wrap_angle(2.0 * math.pi + 0.25) == pytest.approx(0.25)


class TestClipPolygon:
    def test_fully_inside_unchanged(self):
        ring = np.array([[-5.0, -5.0], [5.0, -5.0], [0.0, 5.0]])
        out = clip_polygon(ring, 30.0)
        assert np.allclose(out, ring)

    def test_crossing_is_clipped_to_box(self):
        ring = np.array([[-40.0, -10.0], [40.0, -10.0], [40.0, 10.0], [-40.0, 10.0]])
        out = clip_polygon(ring, 30.0)
        assert np.max(np.abs(out)) <= 30.0 + 1e-9
        assert shoelace(out) == pytest.approx(60.0 * 20.0)
        corners = {(round(px, 6), round(py, 6)) for px, py in out}
        assert corners == {(-30.0, -10.0), (30.0, -10.0), (30.0, 10.0), (-30.0, 10.0)}

    def test_containing_box_clips_to_box(self):
        ring = np.array([[-100.0, -100.0], [100.0, -100.0], [100.0, 100.0], [-100.0, 100.0]])
        out = clip_polygon(ring, 30.0)
        assert shoelace(out) == pytest.approx(3600.0)

    def test_fully_outside_is_empty(self):
        ring = np.array([[40.0, 40.0], [50.0, 40.0], [45.0, 50.0]])
        out = clip_polygon(ring, 30.0)
        assert out.shape == (0, 2)

    def test_degenerate_input_is_empty(self):
        out = clip_polygon(np.array([[0.0, 0.0], [1.0, 1.0]]), 30.0)
        assert out.shape == (0, 2)
        assert clip_polygon(np.empty((0, 2)), 30.0).shape == (0, 2)
