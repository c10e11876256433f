"""
Tests for macro-page slicing, concentrated sets, run lengths and predictability.
"""

import pytest
from hypothesis import given, strategies as st

from analysis.concentration import (
    SliceCounts,
    classify_predictability,
    concentrated_pages,
    concentration_run_lengths,
    pooled_run_lengths,
    slice_page_counts,
    slices_frame,
    top_k_coverage,
    top_page_share_profile,
    unpredictable_fraction,
)
from errors import EmptySlice, NoActivity

from tests.conftest import GIB, make_workload, seconds

MIB = 1 << 20


def slices_with_hot(judged, total_slices, hot=7):
    """Slices where `hot` dominates exactly in the judged indices."""
    out = []
    for i in range(total_slices):
        counts = {hot: 10, 1: 1} if i in judged else {1: 10, hot: 1}
        out.append(SliceCounts(i, counts))
    return out


class TestSlicePageCounts:
    def test_offset_bucketing(self):
        workload = make_workload("v", [(0, "R", 0, 4096), (1, "R", 512 * MIB, 4096), (2, "R", GIB + 512 * MIB, 4096)])
        (only,) = slice_page_counts(workload)
        assert only.counts == {0: 2, 1: 1}

    def test_fifteen_second_slices(self):
        workload = make_workload("v", [(0, "R", 0, 1), (seconds(20), "R", 0, 1)])
        assert len(slice_page_counts(workload)) == 2

    def test_gap_slice_is_empty(self):
        workload = make_workload("v", [(0, "R", 0, 1), (seconds(31), "R", 0, 1)])
        slices = slice_page_counts(workload)
        assert [s.is_empty for s in slices] == [False, True, False]


class TestTopPageShares:
    def test_single_slice(self):
        profile = top_page_share_profile([SliceCounts(0, {"A": 6, "B": 3, "C": 1})], 3)
        assert profile == pytest.approx([0.6, 0.3, 0.1])

    def test_missing_ranks_contribute_zero(self):
        profile = top_page_share_profile([SliceCounts(0, {"A": 10}), SliceCounts(1, {"B": 5, "C": 5})], 2)
        assert profile == pytest.approx([0.75, 0.25])

    def test_uniform_slice(self):
        profile = top_page_share_profile([SliceCounts(0, {p: 3 for p in range(10)})], 1)
        assert profile == pytest.approx([0.1])

    def test_empty_slices_are_ignored(self):
        profile = top_page_share_profile([SliceCounts(0, {}), SliceCounts(1, {0: 4})], 1)
        assert profile == [1.0]

    def test_no_activity(self):
        with pytest.raises(NoActivity):
            top_page_share_profile([SliceCounts(0, {})], 1)

    def test_top_k_coverage(self):
        assert top_k_coverage([0.5, 0.2, 0.1], k=2) == pytest.approx(0.7)


class TestConcentratedPages:
    def test_first_page_exceeds_half(self):
        assert concentrated_pages(SliceCounts(0, {1: 6, 2: 3, 3: 1})).pages == (1,)

    def test_half_is_not_enough(self):
        cset = concentrated_pages(SliceCounts(0, {1: 5, 2: 4, 3: 1}))
        assert cset.pages == (1, 2)
        assert (cset.covered_count, cset.total_count) == (9, 10)

    def test_single_page(self):
        assert concentrated_pages(SliceCounts(3, {42: 1})).pages == (42,)

    def test_ties_rank_by_page_id(self):
        assert concentrated_pages(SliceCounts(0, {9: 2, 4: 2, 5: 1})).pages == (4, 9)

    def test_empty_slice(self):
        with pytest.raises(EmptySlice):
            concentrated_pages(SliceCounts(0, {}))


@given(st.dictionaries(st.integers(0, 500), st.integers(1, 1000), min_size=1, max_size=40))
def test_concentrated_set_is_minimal(counts):
    cset = concentrated_pages(SliceCounts(0, counts))
    total = sum(counts.values())
    covered = sum(counts[p] for p in cset.pages)
    assert 2 * covered > total
    assert 2 * (covered - counts[cset.pages[-1]]) <= total
    ranked = sorted(counts.values(), reverse=True)
    assert sorted((counts[p] for p in cset.pages), reverse=True) == ranked[: len(cset.pages)]


class TestRunLengths:
    def test_runs_split_on_gaps(self):
        runs = concentration_run_lengths(slices_with_hot({0, 1, 2, 5}, 8))
        assert runs[7] == [3, 1]

    def test_never_concentrated(self):
        runs = concentration_run_lengths(slices_with_hot(set(), 4))
        assert runs.get(7, []) == []

    def test_every_slice(self):
        assert concentration_run_lengths(slices_with_hot(set(range(10)), 10))[7] == [10]

    def test_pooled(self):
        assert pooled_run_lengths({1: [3, 1], 2: [2]}) == [1, 2, 3]


class TestPredictability:
    def _hot(self, judged, total=100):
        result = classify_predictability(slices_with_hot(set(judged), total))
        return next(p for p in result if p.macro_page_id == 7)

    def test_rare_page_is_unpredictable(self):
        page = self._hot(range(2))
        assert page.judgment_ratio == pytest.approx(0.02)
        assert page.unpredictable

    def test_always_concentrated_is_predictable(self):
        assert not self._hot(range(100)).unpredictable

    def test_boundary_is_strict(self):
        page = self._hot(range(5))
        assert page.judgment_ratio == 0.05
        assert not page.unpredictable

    def test_active_only_denominator(self):
        slices = [SliceCounts(0, {7: 1}), SliceCounts(1, {}), SliceCounts(2, {}), SliceCounts(3, {})]
        (all_slices,) = classify_predictability(slices, include_empty_slices=True)
        (active,) = classify_predictability(slices, include_empty_slices=False)
        assert all_slices.judgment_ratio == 0.25
        assert active.judgment_ratio == 1.0

    def test_unpredictable_fraction(self):
        result = classify_predictability(slices_with_hot({0}, 40))
        # page 1 dominates 39 slices, page 7 only one
        assert unpredictable_fraction(result) == 0.5
        assert unpredictable_fraction([]) == 0.0


def test_slices_frame_is_long_format():
    frame = slices_frame([SliceCounts(0, {2: 1, 1: 3}), SliceCounts(1, {})])
    assert frame.values.tolist() == [[0, 1, 3], [0, 2, 1]]
