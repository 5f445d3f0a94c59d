"""Trajectory-set distance and greedy covering, checked against a
brute-force subset-enumeration oracle on small inputs."""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from scenekit import (CoverReport, InvalidInputError, Trajectory,
                      TrajectorySet, delta, delta_matrix, greedy_cover,
                      greedy_cover_indices, is_cover, load_coverset,
                      save_coverset)


def oracle_delta(a, b):
    """Max pointwise Euclidean distance, plain loops."""
    worst = 0.0
    for p, q in zip(a, b):
        worst = max(worst, math.dist(p, q))
    return worst


def oracle_min_cover_size(arr, epsilon):
    """Smallest subset covering every row, by exhaustive enumeration."""
    n = len(arr)
    covers = delta_matrix(arr, arr) < epsilon
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            if covers[:, combo].any(axis=1).all():
                return size
    raise AssertionError("self-cover always exists")


def make_set(rng, n, t=12):
    arr = rng.uniform(-20, 20, size=(n, t, 2)).cumsum(axis=1) * 0.2
    return arr


class TestDelta:
    def test_known_value(self):
        a = [[0, 0], [1, 0], [2, 0]]
        b = [[0, 0], [1, 2], [2, 1]]
        assert delta(a, b) == pytest.approx(2.0, abs=1e-12)

    def test_oracle_agreement(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            a = rng.normal(size=(12, 2))
            b = rng.normal(size=(12, 2))
            assert delta(a, b) == pytest.approx(oracle_delta(a, b), abs=1e-12)

    def test_symmetry_and_identity(self):
        rng = np.random.default_rng(8)
        a, b = rng.normal(size=(2, 12, 2))
        assert delta(a, b) == delta(b, a)
        assert delta(a, a) == 0.0

    def test_triangle_inequality(self):
        rng = np.random.default_rng(9)
        for _ in range(30):
            a, b, c = rng.normal(size=(3, 12, 2))
            assert delta(a, c) <= delta(a, b) + delta(b, c) + 1e-12

    def test_length_mismatch_rejected(self):
        with pytest.raises(InvalidInputError):
            delta([[0, 0], [1, 1]], [[0, 0]])


class TestDeltaMatrix:
    def test_matches_pairwise_delta(self):
        rng = np.random.default_rng(10)
        a = make_set(rng, 7)
        b = make_set(rng, 5)
        mat = delta_matrix(a, b)
        assert mat.shape == (7, 5)
        for i in range(7):
            for j in range(5):
                assert mat[i, j] == pytest.approx(delta(a[i], b[j]), abs=1e-12)

    def test_chunked_path(self):
        # force the chunked branch with a base larger than the chunk size
        rng = np.random.default_rng(11)
        a = make_set(rng, 300)
        b = make_set(rng, 3)
        mat = delta_matrix(a, b)
        for i in (0, 128, 255, 256, 299):
            assert mat[i, 0] == pytest.approx(delta(a[i], b[0]), abs=1e-12)


class TestGreedyCover:
    def test_matches_brute_force_on_small_sets(self):
        rng = np.random.default_rng(12)
        for trial in range(20):
            n = int(rng.integers(3, 11))
            arr = make_set(rng, n)
            epsilon = float(rng.uniform(1.0, 8.0))
            greedy_n = len(greedy_cover_indices(arr, epsilon))
            opt = oracle_min_cover_size(arr, epsilon)
            assert opt <= greedy_n
            assert greedy_n <= opt * (1 + math.log(n)) + 1e-9

    def test_result_is_a_cover(self):
        rng = np.random.default_rng(13)
        arr = make_set(rng, 60)
        epsilon = 3.0
        idx = greedy_cover_indices(arr, epsilon)
        report = is_cover(arr[idx], arr, epsilon)
        assert report.is_cover and report.worst_uncovered_distance < epsilon
        assert report.cover_size == len(idx)

    def test_tie_breaks_to_lowest_index(self):
        # two identical clusters, equal coverage counts: index 0 wins first
        a = np.zeros((1, 12, 2))
        b = np.full((1, 12, 2), 100.0)
        arr = np.concatenate([a, a, b, b])
        idx = greedy_cover_indices(arr, epsilon=1.0)
        assert idx[0] == 0 and idx[1] == 2

    def test_strict_inequality_at_threshold(self):
        # two trajectories exactly epsilon apart do not cover each other
        a = np.zeros((12, 2))
        b = np.zeros((12, 2))
        b[-1] = [2.0, 0.0]
        arr = np.stack([a, b])
        assert len(greedy_cover_indices(arr, epsilon=2.0)) == 2
        assert len(greedy_cover_indices(arr, epsilon=2.0 + 1e-9)) == 1

    def test_epsilon_monotone(self):
        rng = np.random.default_rng(14)
        arr = make_set(rng, 80)
        sizes = [len(greedy_cover_indices(arr, e)) for e in (0.5, 1.0, 2.0, 4.0)]
        assert sizes == sorted(sizes, reverse=True)

    def test_greedy_cover_wraps_indices(self):
        rng = np.random.default_rng(15)
        base = TrajectorySet.from_array(make_set(rng, 30))
        cover = greedy_cover(base, epsilon=2.0)
        assert isinstance(cover, TrajectorySet)
        assert cover.epsilon == 2.0
        idx = greedy_cover_indices(base.as_array(), 2.0)
        np.testing.assert_array_equal(cover.as_array(), base.as_array()[idx])

    def test_invalid_epsilon(self):
        with pytest.raises(InvalidInputError):
            greedy_cover_indices(np.zeros((2, 12, 2)), epsilon=0.0)


class TestIsCover:
    def test_report_fields(self):
        rng = np.random.default_rng(16)
        arr = make_set(rng, 20)
        report = is_cover(arr[:1], arr, epsilon=1e9)
        assert report.is_cover and report.cover_size == 1
        assert report.worst_uncovered_distance >= 0.0

    def test_not_a_cover_reports_worst(self):
        a = np.zeros((12, 2))
        b = np.zeros((12, 2))
        b[:] = [5.0, 0.0]
        report = is_cover(a[None], np.stack([a, b]), epsilon=2.0)
        assert not report.is_cover
        assert report.worst_uncovered_distance == pytest.approx(5.0, abs=1e-12)

    def test_empty_candidate(self):
        report = is_cover(np.zeros((0, 12, 2)), np.zeros((3, 12, 2)), 1.0)
        assert not report.is_cover and report.cover_size == 0
        assert math.isinf(report.worst_uncovered_distance)

    def test_empty_base_is_covered(self):
        report = is_cover(np.zeros((1, 12, 2)), np.zeros((0, 12, 2)), 1.0)
        assert report.is_cover


class TestTrajectorySet:
    def test_shape_invariant(self):
        t1 = Trajectory(np.zeros((12, 2)))
        with pytest.raises(InvalidInputError):
            TrajectorySet([t1, Trajectory(np.zeros((24, 2)), sample_rate=4.0)])

    def test_roundtrip_file(self, tmp_path):
        rng = np.random.default_rng(17)
        base = TrajectorySet.from_array(make_set(rng, 25))
        cover = greedy_cover(base, epsilon=2.5)
        path = tmp_path / "cover.json"
        save_coverset(path, cover, base_size=25)
        loaded = load_coverset(path)
        assert loaded.epsilon == 2.5
        np.testing.assert_array_equal(loaded.as_array(), cover.as_array())

    def test_load_rejects_inconsistent_size(self, tmp_path):
        rng = np.random.default_rng(18)
        cover = greedy_cover(TrajectorySet.from_array(make_set(rng, 10)), 2.0)
        path = tmp_path / "cover.json"
        save_coverset(path, cover, base_size=10)
        import json
        payload = json.loads(path.read_text())
        payload["cover_size"] = payload["cover_size"] + 1
        path.write_text(json.dumps(payload))
        with pytest.raises(InvalidInputError):
            load_coverset(path)
