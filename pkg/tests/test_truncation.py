"""Tests for the cutoff operator and the truncated coefficients."""

import math

import numpy as np
import pytest

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from stocsf.classes.curvature_state import CurvatureState, constant_state
from stocsf.classes.flow_config import FlowConfig
from stocsf.coefficients import ito_coefficients
from stocsf.coordinator import run_flow
from stocsf.exceptions import InvalidInputError
from stocsf.noise import sample_path
from stocsf.truncation import TruncationLevel, cutoff, truncated_coefficients

LEVELS = [1, 2, 10, 100]


def _assert_same_fields(first, second):
    np.testing.assert_array_equal(first.drift_f, second.drift_f)
    np.testing.assert_array_equal(first.diff_f, second.diff_f)
    assert first.drift_L == second.drift_L
    assert first.diff_L == second.diff_L


class TestCutoff:
    """T_n M."""

    def test_small_positive_value_is_lifted(self):
        assert cutoff(10, 0.05) == pytest.approx(0.1)

    def test_large_value_is_unchanged(self):
        assert cutoff(10, 5.0) == 5.0

    def test_small_negative_value(self):
        assert cutoff(10, -0.05) == pytest.approx(-0.1)

    def test_zero_maps_to_one_over_n(self):
        assert cutoff(10, 0.0) == pytest.approx(0.1)

    def test_boundary_value_is_kept(self):
        assert cutoff(4, 0.25) == 0.25

    def test_accepts_level_object(self):
        assert cutoff(TruncationLevel(2), 0.1) == pytest.approx(0.5)

    def test_array_input(self):
        np.testing.assert_allclose(cutoff(2, np.array([-3.0, -0.1, 0.0, 0.2, 0.7])), [-3.0, -0.5, 0.5, 0.5, 0.7])

    @pytest.mark.parametrize("n", [0, -1, 1.5])
    def test_invalid_level_rejected(self, n):
        with pytest.raises(InvalidInputError):
            TruncationLevel(n)

    @pytest.mark.parametrize("n", LEVELS)
    def test_linear_growth(self, n):
        """|T_n M| <= 1 + |M| on 10^4 random samples."""
        rng = np.random.default_rng(n)
        M = rng.standard_normal(10000) * 10.0 ** rng.uniform(-4, 2, 10000)
        assert np.all(np.abs(cutoff(n, M)) <= 1.0 + np.abs(M))

    @pytest.mark.parametrize("n", LEVELS)
    def test_lipschitz_same_sign(self, n):
        """
        |T_n M1 - T_n M2| <= |M1 - M2| on 10^4 random same-sign pairs.

        Across zero the cutoff jumps from -1/n to 1/n, so pairs are drawn on one side; the
        length it acts on is always positive.
        """
        rng = np.random.default_rng(100 + n)
        sign = np.where(rng.random(10000) < 0.5, -1.0, 1.0)
        first = sign * np.abs(rng.standard_normal(10000)) * 10.0 ** rng.uniform(-4, 1, 10000)
        second = sign * np.abs(rng.standard_normal(10000)) * 10.0 ** rng.uniform(-4, 1, 10000)
        gap = np.abs(cutoff(n, first) - cutoff(n, second))
        assert np.all(gap <= np.abs(first - second) + 1e-15)


class TestTruncatedCoefficients:
    """Coefficients with L replaced by T_n L."""

    def test_identity_above_threshold(self):
        state = constant_state(1.0, 2 * math.pi, 16)
        _assert_same_fields(truncated_coefficients(state, 0.1, 10), ito_coefficients(state, 0.1))

    def test_small_length_is_lifted(self):
        n = 10
        low = constant_state(1.0, 1 / (2 * n), 16)
        lifted = constant_state(1.0, 1 / n, 16)
        _assert_same_fields(truncated_coefficients(low, 0.1, n), ito_coefficients(lifted, 0.1))

    def test_converges_for_large_n(self):
        """Exact once n > 1/L."""
        r = np.arange(32) / 32
        state = CurvatureState(1.0 + 0.1 * np.cos(2 * np.pi * r), 0.05)
        _assert_same_fields(truncated_coefficients(state, 0.2, 21), ito_coefficients(state, 0.2))
        assert not np.array_equal(truncated_coefficients(state, 0.2, 19).drift_f, ito_coefficients(state, 0.2).drift_f)


class TestTruncatedRuns:
    """Truncated and untruncated runs coincide while L stays in [1/n, n]."""

    def test_pathwise_coincidence(self):
        initial = constant_state(2.0, math.pi, 16)
        common = dict(sigma=0.1, N=16, dt=1e-4, t_end=0.05, scheme="euler_maruyama", blowup_f_max=1e3, blowup_L_bounds=(1e-3, 1e3))
        path = sample_path(5, 1e-4, 500)
        plain = run_flow(initial, FlowConfig(**common), path)
        truncated = run_flow(initial, FlowConfig(trunc_n=10, **common), path)
        assert np.all((plain.lengths >= 0.1) & (plain.lengths <= 10))
        for a, b in zip(plain.snapshots, truncated.snapshots):
            assert abs(a.L - b.L) <= 1e-12
            assert np.max(np.abs(a.f - b.f)) <= 1e-12

    def test_truncation_sets_stopping_thresholds(self):
        config = FlowConfig(trunc_n=10)
        assert config.blowup_f_max == 10.0
        assert config.blowup_L_bounds == (0.1, 10.0)

    def test_explicit_thresholds_win(self):
        config = FlowConfig(trunc_n=10, blowup_f_max=50.0, blowup_L_bounds=(None, 20.0))
        assert config.blowup_f_max == 50.0
        assert config.blowup_L_bounds == (0.1, 20.0)
