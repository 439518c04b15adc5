"""Tests for the Brownian path driver."""

import struct

import numpy as np
import pytest

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from stocsf.classes.brownian_path import BrownianPath, dump_path, load_path
from stocsf.const import BMPATH_HEADER_FORMAT, BMPATH_HEADER_SIZE, BMPATH_MAGIC
from stocsf.exceptions import InvalidInputError
from stocsf.noise import coarsen, member_seed, path_for_steps, refinement_factor, sample_path, truncate


@pytest.fixture(scope="module")
def long_path():
    """The 10^5-increment path used by the statistical checks."""
    return sample_path(42, 1e-3, 100000)


class TestSamplePath:
    """Determinism and statistics of sample_path."""

    def test_same_triple_is_bit_identical(self, long_path):
        again = sample_path(42, 1e-3, 100000)
        assert np.array_equal(again.W, long_path.W)
        assert again.same_as(long_path)

    def test_different_seed_differs(self):
        assert not np.array_equal(sample_path(1, 1e-3, 100).W, sample_path(2, 1e-3, 100).W)

    def test_starts_at_zero(self, long_path):
        assert long_path.W[0] == 0.0
        assert long_path.count == 100000
        assert len(long_path.increments) == 100000

    def test_increment_variance(self, long_path):
        """Sample variance of 10^5 increments lies within [0.97, 1.03] * base_dt."""
        variance = np.var(long_path.increments)
        assert 0.97e-3 <= variance <= 1.03e-3

    def test_increment_mean(self, long_path):
        assert abs(np.mean(long_path.increments)) < 5 * np.sqrt(1e-3 / 100000)

    def test_lag_one_autocorrelation(self, long_path):
        x = long_path.increments - np.mean(long_path.increments)
        correlation = np.sum(x[1:] * x[:-1]) / np.sum(x * x)
        assert abs(correlation) <= 0.02

    def test_negative_seed_is_accepted(self):
        path = sample_path(-5, 1e-2, 10)
        assert path.seed == -5
        assert path.count == 10

    @pytest.mark.parametrize("base_dt", [0.0, -1e-3])
    def test_nonpositive_base_dt_rejected(self, base_dt):
        with pytest.raises(InvalidInputError):
            sample_path(0, base_dt, 10)

    @pytest.mark.parametrize("count", [0, -3])
    def test_nonpositive_count_rejected(self, count):
        with pytest.raises(InvalidInputError):
            sample_path(0, 1e-3, count)


class TestCoarsen:
    """Refinement-consistent coarse views."""

    def test_factor_one_is_identity(self):
        path = sample_path(7, 1e-4, 64)
        assert coarsen(path, 1).same_as(path)

    def test_nested_coarsening_is_exact(self):
        path = sample_path(7, 1e-4, 64)
        assert np.array_equal(coarsen(coarsen(path, 2), 2).W, coarsen(path, 4).W)

    def test_final_value_preserved(self):
        path = sample_path(7, 1e-4, 64)
        assert coarsen(path, 8).W[-1] == path.W[-1]

    def test_shared_times_agree(self):
        path = sample_path(11, 1e-4, 60)
        coarse = coarsen(path, 3)
        assert coarse.base_dt == pytest.approx(3e-4)
        np.testing.assert_array_equal(coarse.W, path.W[::3])

    def test_increments_are_block_sums(self):
        path = sample_path(11, 1e-4, 60)
        coarse = coarsen(path, 4)
        np.testing.assert_allclose(coarse.increments, path.increments.reshape(-1, 4).sum(axis=1), atol=1e-15)

    def test_non_divisor_rejected(self):
        with pytest.raises(InvalidInputError):
            coarsen(sample_path(0, 1e-4, 10), 3)


class TestPathViews:
    """Helpers that line a path up with a run."""

    def test_truncate(self):
        path = sample_path(3, 1e-3, 20)
        head = truncate(path, 5)
        assert head.count == 5
        np.testing.assert_array_equal(head.W, path.W[:6])

    def test_refinement_factor(self):
        path = sample_path(3, 1e-7, 10)
        assert refinement_factor(path, 1e-5) == 100

    def test_refinement_factor_rejects_fraction(self):
        with pytest.raises(InvalidInputError):
            refinement_factor(sample_path(3, 1e-3, 10), 1.5e-3)

    def test_path_for_steps(self):
        path = sample_path(3, 1e-4, 100)
        view = path_for_steps(path, 4e-4, 10)
        assert view.count == 10
        np.testing.assert_array_equal(view.W, path.W[:41:4])

    def test_path_for_steps_too_short(self):
        with pytest.raises(InvalidInputError):
            path_for_steps(sample_path(3, 1e-4, 10), 1e-4, 11)

    def test_member_seeds(self):
        assert [member_seed(100, index) for index in range(3)] == [100, 101, 102]


class TestBinaryDump:
    """BMPATH01 increments file."""

    def test_header_layout(self, tmp_path):
        path = sample_path(123, 1e-3, 16)
        target = tmp_path / "path.bin"
        dump_path(path, target)
        payload = target.read_bytes()
        assert len(payload) == BMPATH_HEADER_SIZE + 8 * 16
        assert struct.unpack(BMPATH_HEADER_FORMAT, payload[:BMPATH_HEADER_SIZE]) == (BMPATH_MAGIC, 123, 16)

    def test_increments_replay_exactly(self, tmp_path):
        path = sample_path(123, 1e-3, 1000)
        target = tmp_path / "path.bin"
        dump_path(path, target)
        loaded = load_path(target, 1e-3)
        assert loaded.seed == 123
        assert loaded.count == 1000
        np.testing.assert_array_equal(np.diff(loaded.W)[:1], path.increments[:1])
        np.testing.assert_allclose(loaded.W, path.W, atol=1e-12)

    def test_bad_magic_rejected(self, tmp_path):
        target = tmp_path / "bad.bin"
        target.write_bytes(struct.pack(BMPATH_HEADER_FORMAT, b"NOTAPATH", 0, 0))
        with pytest.raises(InvalidInputError):
            load_path(target, 1e-3)

    def test_truncated_body_rejected(self, tmp_path):
        target = tmp_path / "short.bin"
        target.write_bytes(struct.pack(BMPATH_HEADER_FORMAT, BMPATH_MAGIC, 0, 4) + b"\x00" * 8)
        with pytest.raises(InvalidInputError):
            load_path(target, 1e-3)

    def test_path_must_start_at_zero(self):
        with pytest.raises(InvalidInputError):
            BrownianPath(seed=0, base_dt=1e-3, W=np.array([0.1, 0.2]))
