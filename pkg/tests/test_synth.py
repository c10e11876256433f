"""
Tests for the SplitMix64 generator and synthetic workloads.
"""

import io
import json

import pytest

from analysis.concentration import (
    classify_predictability,
    concentrated_pages,
    slice_page_counts,
    top_page_share_profile,
)
from analysis.temporal import coarsen, interval_counts
from errors import InvalidSpec
from sources.prng import SplitMix64
from sources.synth import Movement, SynthSpec, generate, hot_page_schedule
from sources.trace import parse_trace, records_to_text

GIB = 1 << 30


class TestSplitMix64:
    def test_published_vectors(self):
        rng = SplitMix64(0)
        assert [rng.next_u64() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]

    def test_derived_draws_stay_in_range(self):
        rng = SplitMix64(42)
        for _ in range(1000):
            assert 0.0 <= rng.random() < 1.0
            assert 0 <= rng.randbelow(7) < 7

    def test_randbelow_needs_positive_bound(self):
        with pytest.raises(ValueError):
            SplitMix64(1).randbelow(0)


class TestSpec:
    @pytest.mark.parametrize(
        "overrides",
        [
            {"hot_share": 0.0},
            {"hot_share": 1.5},
            {"request_rate": 0},
            {"hot_page": 8},
            {"movement": "teleport"},
            {"io_sizes": [[4096, 1], [8192, 1], [16384, 1]]},
            {"warp": 9},
        ],
    )
    def test_invalid_specs(self, overrides):
        with pytest.raises(InvalidSpec):
            SynthSpec.from_dict(overrides)

    def test_load_json(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text(json.dumps({"seed": 3, "movement": "step", "io_sizes": [[4096, 3], [65536, 1]]}))
        spec = SynthSpec.load(path)
        assert spec.movement is Movement.STEP
        assert spec.io_sizes == ((4096, 0.75), (65536, 0.25))
        assert SynthSpec.from_dict(spec.to_dict()) == spec

    def test_missing_file(self, tmp_path):
        with pytest.raises(InvalidSpec):
            SynthSpec.load(tmp_path / "nope.json")


class TestGenerate:
    def test_same_seed_same_trace(self):
        spec = SynthSpec(seed=11, duration_s=60)
        assert generate(spec).records == generate(spec).records

    def test_seed_changes_trace(self):
        assert generate(SynthSpec(seed=1, duration_s=60)).records != generate(SynthSpec(seed=2, duration_s=60)).records

    def test_full_share_stays_on_hot_page(self):
        workload = generate(SynthSpec(hot_share=1.0, hot_page=3, duration_s=60))
        assert {r.offset_bytes // GIB for r in workload} == {3}

    def test_requests_are_aligned_and_inside_their_page(self):
        spec = SynthSpec(duration_s=60, io_sizes=((4096, 0.5), (65536, 0.5)), hot_share=0.5)
        workload = generate(spec)
        assert len(workload) == spec.total_requests
        assert {r.length_bytes for r in workload} == {4096, 65536}
        for r in workload:
            assert r.offset_bytes % 4096 == 0
            assert r.offset_bytes // GIB == (r.end_bytes - 1) // GIB
            assert r.end_bytes <= spec.footprint_bytes

    def test_step_schedule_cycles_span(self):
        spec = SynthSpec(movement="step", hot_page=2, span=3, dwell_slices=2, duration_s=150)
        assert hot_page_schedule(spec, SplitMix64(0)) == [2, 2, 3, 3, 4, 4, 2, 2, 3, 3]

    def test_trace_text_round_trip(self):
        workload = generate(SynthSpec(duration_s=30))
        text = records_to_text(workload.records)
        assert list(parse_trace(io.StringIO(text))) == workload.records


def test_fixed_hot_page_is_recovered():
    spec = SynthSpec(seed=5, hot_page=4, hot_share=0.9, duration_s=600)
    slices = slice_page_counts(generate(spec))
    assert len(slices) == 40
    recovered = sum(1 for s in slices if concentrated_pages(s).pages == (4,))
    assert recovered >= 38
    assert top_page_share_profile(slices, 1)[0] == pytest.approx(0.90, abs=0.02)


@pytest.mark.parametrize("pages, unpredictable", [(20, False), (21, True)])
def test_moving_hot_page_predictability_boundary(pages, unpredictable):
    spec = SynthSpec(
        seed=9,
        movement="step",
        span=pages,
        dwell_slices=1,
        footprint_bytes=pages * GIB,
        duration_s=pages * 15,
    )
    result = classify_predictability(slice_page_counts(generate(spec)))
    assert len(result) == pages
    for page in result:
        assert page.judgment_ratio == pytest.approx(1 / pages)
        assert page.unpredictable is unpredictable


@pytest.mark.parametrize("seed", range(5))
def test_synth_interval_conservation(seed):
    workload = generate(SynthSpec(seed=seed, duration_s=400, request_rate=7, movement="random"))
    fine = interval_counts(workload, 15)
    assert fine.total == len(workload)
    assert interval_counts(workload, 30).counts.tolist() == coarsen(fine, 2).counts.tolist()
