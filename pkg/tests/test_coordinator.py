"""Tests for FlowCoordinator and run_flow."""

import math

import numpy as np
import pytest

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from stocsf.classes.curvature_state import CurvatureState, constant_state
from stocsf.classes.flow_config import FlowConfig
from stocsf.coordinator import FlowCoordinator, default_snapshot_every, run_flow
from stocsf.exceptions import InvalidInputError
from stocsf.noise import sample_path

PI = math.pi


def _smooth_state(N=32):
    r = np.arange(N) / N
    return CurvatureState(1.0 + 0.2 * np.cos(2 * PI * r) + 0.1 * np.sin(4 * PI * r), 2 * PI)


class TestSnapshotCadence:
    """Snapshot selection."""

    def test_default_cadence(self):
        assert default_snapshot_every(100) == 1
        assert default_snapshot_every(1998) == 1
        assert default_snapshot_every(1999) == 2
        assert default_snapshot_every(100000) == 51

    def test_default_run_stays_under_cap(self):
        config = FlowConfig(sigma=0.0, N=16, dt=1e-5, t_end=0.05, scheme="deterministic")
        record = run_flow(constant_state(1.0, 2 * PI, 16), config, sample_path(0, 1e-5, 5000))
        assert len(record.snapshots) <= 2000
        assert record.snapshots[0].t == 0.0
        assert record.final.t == pytest.approx(0.05)

    def test_explicit_cadence_keeps_final_snapshot(self):
        config = FlowConfig(sigma=0.1, N=16, dt=1e-4, t_end=1e-2)
        record = run_flow(constant_state(1.0, 2 * PI, 16), config, sample_path(0, 1e-4, 100), snapshot_every=30)
        np.testing.assert_allclose(record.times, [0.0, 3e-3, 6e-3, 9e-3, 1e-2], atol=1e-15)

    def test_times_follow_initial_time(self):
        initial = constant_state(1.0, 2 * PI, 16, t=1.0)
        config = FlowConfig(sigma=0.0, N=16, dt=1e-3, t_end=1e-2)
        record = run_flow(initial, config, sample_path(0, 1e-3, 10), snapshot_every=5)
        np.testing.assert_allclose(record.times, [1.0, 1.005, 1.01])

    def test_noise_value_recorded(self):
        path = sample_path(4, 1e-4, 100)
        config = FlowConfig(sigma=0.1, N=16, dt=1e-4, t_end=1e-2)
        record = run_flow(constant_state(1.0, 2 * PI, 16), config, path, snapshot_every=10)
        np.testing.assert_array_equal(record.diagnostic_series("W"), path.W[::10])


class TestCircleRuns:
    """Runs started from a round circle."""

    def test_deterministic_length_matches_shrinking_circle(self):
        config = FlowConfig(sigma=0.0, N=32, dt=1e-4, t_end=0.4, scheme="heun")
        record = run_flow(constant_state(1.0, 2 * PI, 32), config, sample_path(0, 1e-4, 4000))
        expected = 2 * PI * np.sqrt(1 - 2 * record.times)
        assert np.max(np.abs(record.lengths - expected) / expected) <= 1e-3
        assert np.max(np.abs(record.diagnostic_series("turning_number") - 1.0)) <= 1e-6

    @pytest.mark.slow
    def test_deterministic_length_fine_grid(self):
        config = FlowConfig(sigma=0.0, N=128, dt=1e-5, t_end=0.4, scheme="heun")
        record = run_flow(constant_state(1.0, 2 * PI, 128), config, sample_path(0, 1e-5, 40000))
        expected = 2 * PI * np.sqrt(1 - 2 * record.times)
        assert np.max(np.abs(record.lengths - expected) / expected) <= 1e-3

    @pytest.mark.parametrize(
        "scheme,bound",
        [("heun", 1e-3), ("deterministic", 1e-3), ("euler_maruyama", 2e-2), ("imex", 2e-2)],
    )
    def test_noisy_turning_defect(self, scheme, bound):
        """L * mean(f) stays at 2 pi; Ito-form schemes drift by O(sqrt(dt)) through the noise product term."""
        config = FlowConfig(sigma=0.1, N=128, dt=1e-5, t_end=0.1, scheme=scheme)
        record = run_flow(constant_state(1.0, 2 * PI, 128), config, sample_path(11, 1e-5, 10000))
        defects = [abs(snapshot.L * np.mean(snapshot.f) - 2 * PI) for snapshot in record.snapshots]
        assert not record.stopped_early
        assert record.final.t == pytest.approx(0.1)
        assert max(defects) <= bound

    def test_length_collapse_stop(self):
        config = FlowConfig(sigma=0.0, N=16, dt=1e-5, t_end=0.51, scheme="deterministic")
        record = run_flow(constant_state(1.0, 2 * PI, 16), config, sample_path(0, 1e-5, 51000))
        assert record.stop_reason == "length collapse"
        assert 0.49 <= record.t_stop <= 0.5
        assert record.final.t == record.t_stop

    def test_completes_before_collapse(self):
        config = FlowConfig(
            sigma=0.0, N=16, dt=1e-4, t_end=0.49, scheme="deterministic",
            blowup_f_max=1e3, blowup_L_bounds=(1e-3, 1e3),
        )
        record = run_flow(constant_state(1.0, 2 * PI, 16), config, sample_path(0, 1e-4, 4900))
        assert not record.stopped_early
        assert record.final.t == pytest.approx(0.49)
        assert record.final.L == pytest.approx(2 * PI * math.sqrt(0.02), rel=1e-3)

    def test_initial_state_beyond_threshold(self):
        config = FlowConfig(sigma=0.0, N=16, dt=1e-4, t_end=1e-2)
        record = run_flow(constant_state(2000.0, 1e-2, 16), config, sample_path(0, 1e-4, 100))
        assert record.stop_reason == "curvature blow-up"
        assert record.t_stop == 0.0
        assert len(record.snapshots) == 1


class TestDiagnostics:
    """Per-snapshot diagnostics."""

    def test_exact_length_residual_small(self):
        config = FlowConfig(sigma=0.1, N=32, dt=1e-4, t_end=0.1, scheme="heun")
        record = run_flow(_smooth_state(), config, sample_path(2, 1e-4, 1000))
        assert np.max(record.diagnostic_series("exact_length_residual")) <= 1e-3

    def test_initial_diagnostics(self):
        config = FlowConfig(sigma=0.1, N=32, dt=1e-4, t_end=1e-3)
        record = run_flow(constant_state(1.0, 2 * PI, 32), config, sample_path(2, 1e-4, 10))
        first = record.snapshots[0].diagnostics
        assert first.W == 0.0
        assert first.exact_length_residual == pytest.approx(0.0, abs=1e-15)
        assert first.f_sq_integral == pytest.approx(1.0)
        assert first.sup_f == 1.0


class TestDeterminism:
    """Reproducibility from (initial, config, seed)."""

    def test_identical_inputs_give_identical_records(self):
        config = FlowConfig(sigma=0.2, N=16, dt=1e-4, t_end=0.02, seed=9)
        first = run_flow(_smooth_state(16), config, sample_path(9, 1e-4, 200))
        second = run_flow(_smooth_state(16), config, sample_path(9, 1e-4, 200))
        assert first.same_as(second, ignore_metadata=True)
        assert first.seed == 9

    def test_different_seeds_differ(self):
        config = FlowConfig(sigma=0.2, N=16, dt=1e-4, t_end=0.02)
        first = run_flow(_smooth_state(16), config, sample_path(1, 1e-4, 200))
        second = run_flow(_smooth_state(16), config, sample_path(2, 1e-4, 200))
        assert not first.same_as(second, ignore_metadata=True)


class TestFlowCoordinator:
    """Coordinator construction and statistics."""

    def test_grid_mismatch(self):
        with pytest.raises(InvalidInputError):
            FlowCoordinator(constant_state(1.0, 2 * PI, 16), FlowConfig(N=32), sample_path(0, 1e-5, 10000))

    def test_bad_snapshot_cadence(self):
        config = FlowConfig(N=16, dt=1e-3, t_end=1e-2)
        with pytest.raises(InvalidInputError):
            FlowCoordinator(constant_state(1.0, 2 * PI, 16), config, sample_path(0, 1e-3, 10), snapshot_every=0)

    def test_short_path_rejected(self):
        config = FlowConfig(N=16, dt=1e-3, t_end=1e-2)
        with pytest.raises(InvalidInputError):
            FlowCoordinator(constant_state(1.0, 2 * PI, 16), config, sample_path(0, 1e-3, 5))

    def test_fine_path_is_coarsened(self):
        config = FlowConfig(sigma=0.1, N=16, dt=1e-3, t_end=1e-2)
        coordinator = FlowCoordinator(constant_state(1.0, 2 * PI, 16), config, sample_path(0, 1e-4, 100))
        assert coordinator.path.count == 10

    def test_get_stats(self):
        config = FlowConfig(sigma=0.0, N=16, dt=1e-3, t_end=1e-2)
        coordinator = FlowCoordinator(constant_state(1.0, 2 * PI, 16), config, sample_path(0, 1e-3, 10), 5)
        record = coordinator.run()
        stats = coordinator.get_stats()
        assert stats["steps_taken"] == 10
        assert stats["steps_planned"] == 10
        assert stats["snapshots_recorded"] == len(record.snapshots) == 3
        assert stats["stop_reason"] is None
        assert record.metadata["steps"] == 10
