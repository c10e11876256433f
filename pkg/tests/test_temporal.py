"""
Tests for interval bucketing, coarsening and box statistics.
"""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from analysis.temporal import Variability, box_stats, classify_variability, coarsen, interval_counts
from errors import EmptySeries, EmptyWorkload
from sources.trace import Workload

from tests.conftest import make_workload, seconds


def workload_at(*secs):
    return make_workload("v", [(seconds(s), "R", 0, 4096) for s in secs])


class TestIntervalCounts:
    def test_floor_bucketing(self):
        assert interval_counts(workload_at(0, 5, 16, 31), 15).counts.tolist() == [2, 1, 1]

    def test_explicit_zero_gap(self):
        assert interval_counts(workload_at(0, 45), 15).counts.tolist() == [1, 0, 0, 1]

    def test_single_record(self):
        assert interval_counts(workload_at(7), 15).counts.tolist() == [1]

    def test_origin_is_first_timestamp(self):
        series = interval_counts(workload_at(100, 114, 115), 15)
        assert series.origin_ts_us == seconds(100)
        assert series.counts.tolist() == [2, 1]

    def test_empty_workload(self):
        with pytest.raises(EmptyWorkload):
            interval_counts(Workload("v", []))

    def test_interval_must_be_positive(self):
        with pytest.raises(ValueError):
            interval_counts(workload_at(0), 0)


@given(st.lists(st.integers(0, 3600), min_size=1, max_size=200))
def test_interval_conservation(secs):
    workload = workload_at(*sorted(secs))
    fine = interval_counts(workload, 15)
    assert fine.total == len(secs)
    coarse = interval_counts(workload, 30)
    paired = coarsen(fine, 2)
    assert paired.counts.tolist()[: len(coarse)] == coarse.counts.tolist()
    assert paired.total == coarse.total


def test_coarsen_pads_odd_length():
    series = interval_counts(workload_at(0, 15, 30), 15)
    assert coarsen(series, 2).counts.tolist() == [2, 1]
    assert coarsen(series, 2).interval_s == 30


class TestBoxStats:
    def test_linear_quartiles(self):
        stats = box_stats([1, 2, 3, 4, 5])
        assert stats.to_dict() == {"min": 1, "lower_quartile": 2, "median": 3, "upper_quartile": 4, "max": 5}

    def test_constant_series(self):
        stats = box_stats([7, 7, 7])
        assert {stats.min, stats.lower_quartile, stats.median, stats.upper_quartile, stats.max} == {7}

    def test_interpolated_median(self):
        assert box_stats([1, 100]).median == 50.5

    def test_empty(self):
        with pytest.raises(EmptySeries):
            box_stats([])

    @given(st.lists(st.integers(0, 10**6), min_size=1, max_size=100))
    def test_ordering(self, values):
        s = box_stats(values)
        assert s.min <= s.lower_quartile <= s.median <= s.upper_quartile <= s.max
        assert s.min == min(values) and s.max == max(values)


class TestVariability:
    def test_steady_series_is_stable(self):
        assert classify_variability(interval_counts(workload_at(*range(0, 150)), 15)) is Variability.STABLE

    def test_spiky_series_is_bursty(self):
        secs = [15 * i for i in range(10) for _ in range(1 if i % 2 == 0 else 10)]
        assert classify_variability(interval_counts(workload_at(*secs), 15)) is Variability.BURSTY

    def test_zero_median_is_bursty(self):
        assert classify_variability(interval_counts(workload_at(0, 100), 15)) is Variability.BURSTY


def test_counts_are_numpy_arrays():
    assert isinstance(interval_counts(workload_at(0)).counts, np.ndarray)
