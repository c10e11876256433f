"""
Concentration command: top-page shares, concentrated sets, run lengths and predictability.
"""

import functools

import pandas as pd
from rich.console import Console

from analysis import (
    box_stats,
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
from commands.common import finish_outputs, job_count, load_workloads, start_outputs
from config import load_config
from display import display_concentration
from utils import parallel_map

console = Console()


def _analyze(workload, macro_page: int, interval_s: int, top_k: int, threshold: float, include_empty: bool) -> dict:
    slices = slice_page_counts(workload, macro_page, interval_s)
    profile = top_page_share_profile(slices, top_k)
    runs = concentration_run_lengths(slices)
    pooled = pooled_run_lengths(runs)
    return {
        "volume_id": workload.volume_id,
        "slices": slices,
        "profile": profile,
        "sets": [concentrated_pages(s) for s in slices if not s.is_empty],
        "runs": runs,
        "pooled": pooled,
        "predictability": classify_predictability(slices, threshold, include_empty),
    }


def cmd_concentration(args):
    """Macro-page concentration per slice and the predictability of hot pages."""
    config = load_config()
    workloads, _, schema = load_workloads(args, config)

    with console.status("[bold green]Measuring IO concentration..."):
        results = parallel_map(
            functools.partial(
                _analyze,
                macro_page=args.macro_page,
                interval_s=args.interval,
                top_k=args.top_k,
                threshold=args.threshold,
                include_empty=args.include_empty,
            ),
            workloads.values(),
            job_count(args, config),
        )

    shares, sets, runs, predictability, rows = [], [], [], [], []
    slice_frames = []
    summary = {}
    for result in results:
        vid = result["volume_id"]
        counts = slices_frame(result["slices"])
        counts.insert(0, "volume_id", vid)
        slice_frames.append(counts)
        for rank, share in enumerate(result["profile"], start=1):
            shares.append({"volume_id": vid, "rank": rank, "average_share": share})
        for cset in result["sets"]:
            sets.append({
                "volume_id": vid,
                "slice": cset.slice_index,
                "pages": " ".join(str(p) for p in cset.pages),
                "page_count": len(cset.pages),
                "covered_count": cset.covered_count,
                "total_count": cset.total_count,
            })
        for page, lengths in result["runs"].items():
            for length in lengths:
                runs.append({"volume_id": vid, "macro_page_id": page, "run_length": length})
        for p in result["predictability"]:
            predictability.append({
                "volume_id": vid,
                "macro_page_id": p.macro_page_id,
                "judgments": p.concentration_judgments,
                "judgment_ratio": p.judgment_ratio,
                "unpredictable": p.unpredictable,
            })

        row = {
            "volume_id": vid,
            "slices": len(result["slices"]),
            "active_slices": len(result["sets"]),
            "top1_share": result["profile"][0],
            "top_k_coverage": top_k_coverage(result["profile"], args.top_k),
            "concentrated_pages": len(result["predictability"]),
            "unpredictable_fraction": unpredictable_fraction(result["predictability"]),
            "max_run_length": max(result["pooled"], default=0),
        }
        rows.append(row)
        summary[vid] = {**row, "run_lengths": box_stats(result["pooled"]).to_dict() if result["pooled"] else None}

    outputs = start_outputs(args, "concentration", config, schema, args.traces)
    outputs.csv("slice_counts.csv", pd.concat(slice_frames, ignore_index=True))
    outputs.csv("top_page_shares.csv", pd.DataFrame(shares, columns=["volume_id", "rank", "average_share"]))
    outputs.csv("concentrated_sets.csv", pd.DataFrame(sets, columns=[
        "volume_id", "slice", "pages", "page_count", "covered_count", "total_count",
    ]))
    outputs.csv("run_lengths.csv", pd.DataFrame(runs, columns=["volume_id", "macro_page_id", "run_length"]))
    outputs.csv("predictability.csv", pd.DataFrame(predictability, columns=[
        "volume_id", "macro_page_id", "judgments", "judgment_ratio", "unpredictable",
    ]))
    outputs.json("concentration.json", summary)
    finish_outputs(outputs)

    display_concentration(rows, args.top_k, args.threshold)
