"""
End-to-end tests driving the tiertrace entry point.
"""

import json
import os

import pandas as pd
import pytest

import config
from tiertrace import main

K5_SCHEMA = os.path.join(os.path.dirname(__file__), os.pardir, "schemas", "k5.schema")


def run(*argv):
    """Run the CLI and return its exit code (0 when it returns normally)."""
    try:
        main([str(a) for a in argv])
    except SystemExit as e:
        return e.code
    return 0


@pytest.fixture
def out(tmp_path):
    return tmp_path / "out"


def read_json(path):
    return json.loads(path.read_text())


class TestUsage:
    def test_help(self):
        assert run("--help") == 0

    def test_no_command(self):
        assert run() == 2

    def test_strict_and_lenient_conflict(self, tiny_trace):
        assert run("stats", tiny_trace, "--strict", "--lenient") == 2

    def test_capacity_modes_conflict(self, tiny_trace):
        assert run("tiersim", tiny_trace, "--tier1-capacity", "1GiB", "--strict-capacity", "--best-effort") == 2

    def test_bad_fraction(self, tiny_trace):
        assert run("stats", tiny_trace, "--fraction", "1.5") == 2

    @pytest.mark.parametrize("factor", ["0", "-2"])
    def test_coarsen_below_one(self, tiny_trace, out, factor):
        assert run("temporal", tiny_trace, "--coarsen", factor, "-o", out) == 2
        assert not (out / "temporal").exists()


class TestStats:
    def test_golden_outputs(self, tiny_trace, data_dir, out):
        assert run("stats", tiny_trace, "-o", out) == 0
        expected = open(os.path.join(data_dir, "tiny_summaries.csv")).read()
        assert (out / "stats" / "summaries.csv").read_text() == expected
        assert (out / "stats" / "top_workloads.txt").read_text() == "vol_a\n"

        selection = read_json(out / "stats" / "selection.json")
        assert selection["share_of_total"] == pytest.approx(0.6)
        assert selection["parse"]["records"] == 10

    def test_manifest(self, tiny_trace, out):
        assert run("stats", tiny_trace, "-o", out, "--metric", "write") == 0
        manifest = read_json(out / "stats" / "manifest.json")
        assert manifest["command"] == "stats"
        assert manifest["parameters"]["metric"] == "write"
        assert manifest["inputs"][0]["size_bytes"] == os.path.getsize(tiny_trace)
        assert len(manifest["inputs"][0]["sha256"]) == 64
        assert manifest["outputs"] == ["selection.json", "size_histograms.csv", "summaries.csv", "top_workloads.txt"]

    def test_output_dir_from_environment(self, tiny_trace, tmp_path, monkeypatch):
        monkeypatch.setenv("TIERTRACE_OUTPUT_DIR", str(tmp_path / "env"))
        assert run("stats", tiny_trace) == 0
        assert (tmp_path / "env" / "stats" / "summaries.csv").exists()


class TestInputErrors:
    def test_missing_file(self, tmp_path, out):
        assert run("stats", tmp_path / "missing.trace", "-o", out) == 5

    def test_malformed_line_strict_and_lenient(self, tiny_trace, tmp_path, out):
        broken = tmp_path / "broken.trace"
        broken.write_text(open(tiny_trace).read() + "40000000,vol_a,X,0,4096\n")
        assert run("stats", broken, "--strict", "-o", out) == 3
        assert run("stats", broken, "-o", out) == 0
        assert read_json(out / "stats" / "selection.json")["parse"]["malformed"] == 1

    def test_empty_trace(self, tmp_path, out):
        empty = tmp_path / "empty.trace"
        empty.write_text("# nothing here\n")
        assert run("stats", empty, "-o", out) == 6


def assert_golden(path, data_dir, name):
    expected = open(os.path.join(data_dir, name)).read()
    assert path.read_text() == expected


def test_temporal_golden(tiny_trace, data_dir, out):
    assert run("temporal", tiny_trace, "-o", out) == 0
    assert_golden(out / "temporal" / "interval_counts.csv", data_dir, "tiny_interval_counts.csv")
    assert read_json(out / "temporal" / "box_stats.json")["vol_a"]["median"] == 2.0


def test_cachesim_golden(tiny_trace, data_dir, out):
    assert run("cachesim", tiny_trace, "-o", out) == 0
    directory = out / "cachesim"
    assert_golden(directory / "hit_ratio_curves.csv", data_dir, "tiny_hit_ratio_curves.csv")
    assert_golden(directory / "algorithm_comparison.csv", data_dir, "tiny_algorithm_comparison.csv")
    assert read_json(directory / "convergence.json")["vol_b"]["arc"]["effect"] == "low_hit"


def test_concentration_golden(tiny_trace, data_dir, out):
    assert run("concentration", tiny_trace, "-o", out) == 0
    directory = out / "concentration"
    for name in ("slice_counts.csv", "top_page_shares.csv", "concentrated_sets.csv", "predictability.csv"):
        assert_golden(directory / name, data_dir, f"tiny_{name}")
    assert (directory / "run_lengths.csv").exists()
    assert "slice_counts.csv" in read_json(directory / "manifest.json")["outputs"]


class TestTiersim:
    def test_dynamic_golden(self, tiny_trace, data_dir, out):
        argv = ("tiersim", tiny_trace, "-p", "dynamic", "--tier1-capacity", "1GiB", "--interval", "30", "-o", out)
        assert run(*argv) == 0
        directory = out / "tiersim"
        assert_golden(directory / "intervals_dynamic.csv", data_dir, "tiny_intervals_dynamic.csv")
        report = read_json(directory / "tiersim_dynamic.json")
        assert report["aggregate"]["promotions"] == 1
        assert report["aggregate"]["tier1_requests"] == 1

    def test_single_infeasible_policy_fails(self, tiny_trace, out):
        assert run("tiersim", tiny_trace, "--policy", "all_first", "--tier1-capacity", "1GiB", "-o", out) == 4

    def test_all_policies_skip_infeasible(self, tiny_trace, out):
        assert run("tiersim", tiny_trace, "--tier1-capacity", "1GiB", "-o", out) == 0
        directory = out / "tiersim"
        assert list(read_json(directory / "skipped.json")) == ["all_first"]
        second = read_json(directory / "tiersim_all_second.json")
        assert second["aggregate"]["mean_latency_us"] == 5000.0
        assert (directory / "intervals_dynamic.csv").exists()
        assert (directory / "tiersim_monitored_cache.json").exists()

    def test_best_effort(self, tiny_trace, out):
        argv = ("tiersim", tiny_trace, "--policy", "all_first", "--tier1-capacity", "1GiB", "--best-effort", "-o", out)
        assert run(*argv) == 0
        report = read_json(out / "tiersim" / "tiersim_all_first.json")
        assert report["capacity_mode_used"] == "best_effort"
        assert report["aggregate"]["requests_served"] == 10


def test_synth_then_stats(tmp_path, out):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"duration_s": 30, "volume_id": "s1"}))
    assert run("synth", spec, "--seed", "7", "-o", out) == 0
    trace = out / "synth" / "s1.trace"
    assert len(trace.read_text().splitlines()) == 300
    assert read_json(out / "synth" / "spec.json")["seed"] == 7

    assert run("stats", trace, "-o", out) == 0
    assert (out / "stats" / "top_workloads.txt").read_text() == "s1\n"


def test_invalid_synth_spec(tmp_path, out):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"hot_share": 0}))
    assert run("synth", spec, "-o", out) == 3


def test_advise(tiny_trace, out):
    assert run("advise", tiny_trace, "--critical", "vol_a", "-o", out) == 0
    advice = pd.read_csv(out / "advise" / "advice.csv")
    assert advice["volume_id"].tolist() == ["vol_a", "vol_b", "vol_c"]
    assert advice["tier1_eligible"].tolist() == [True, False, False]


class TestSetup:
    def test_flags_save_without_prompting(self):
        assert run("setup", "--output-dir", "runs", "--jobs", "3", "--lenient") == 0
        assert config.load_config() == {"output_dir": "runs", "jobs": 3, "strict": False}

        assert run("setup", "--schema", K5_SCHEMA) == 0
        assert config.load_config()["schema"] == K5_SCHEMA
        assert config.load_config()["jobs"] == 3

    def test_unreadable_schema_is_not_saved(self, tmp_path):
        assert run("setup", "--schema", tmp_path / "missing.schema") == 3
        assert config.load_config() == {}

    def test_zero_workers_rejected(self):
        assert run("setup", "--jobs", "0") == 2

    def test_show(self, capsys):
        assert run("setup", "--show") == 0
        assert "No configuration saved yet" in capsys.readouterr().out
        assert run("setup", "--jobs", "2") == 0
        assert run("setup", "--show") == 0
        assert "jobs" in capsys.readouterr().out
