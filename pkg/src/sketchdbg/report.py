"""Study analysis: paired action counts in, stats plus artifacts out.

Input rows pair one task's action count under pen input with the same
task's count under the toolbar.  Output is a delimited table, a JSON
summary (signed-rank test + bootstrap interval on the per-task saving),
and a pair of figures rendered to files.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .stats import bootstrap_mean_ci, mean_difference, wilcoxon_signed_rank


@dataclass(frozen=True)
class PairedCount:
    task: str
    sketch: int
    wimp: int

    @property
    def saving(self) -> int:
        return self.wimp - self.sketch


def read_pairs_csv(path: str | Path) -> list[PairedCount]:
    """Rows of `task,sketch,wimp` with a header line."""
    rows: list[PairedCount] = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"task", "sketch", "wimp"} - set(reader.fieldnames or ())
        if missing:
            raise ValueError(
                f"pairs file needs columns task,sketch,wimp; "
                f"missing {', '.join(sorted(missing))}")
        for lineno, row in enumerate(reader, start=2):
            try:
                rows.append(PairedCount(task=row["task"],
                                        sketch=int(row["sketch"]),
                                        wimp=int(row["wimp"])))
            except (TypeError, ValueError):
                raise ValueError(f"bad counts on line {lineno} of {path}")
    if not rows:
        raise ValueError(f"no data rows in {path}")
    return rows


def analyze_pairs(rows: Sequence[PairedCount], *, b: int = 10_000,
                  alpha: float = 0.05, seed: int = 0) -> dict:
    savings = [r.saving for r in rows]
    test = wilcoxon_signed_rank([r.wimp for r in rows],
                                [r.sketch for r in rows])
    ci = bootstrap_mean_ci(savings, b=b, alpha=alpha, seed=seed)
    return {
        "n": len(rows),
        "meanSketch": mean_difference([r.sketch for r in rows]),
        "meanWimp": mean_difference([r.wimp for r in rows]),
        "meanSaving": mean_difference(savings),
        "wilcoxon": {
            "statistic": test.statistic,
            "pValue": test.p_value,
            "method": test.method,
            "n": test.n,
        },
        "savingCI": {
            "low": ci.low, "high": ci.high, "alpha": alpha,
            "b": ci.b, "seed": ci.seed, "redraws": ci.redraws,
        },
    }


def analysis_json(analysis: dict) -> str:
    return json.dumps(analysis, sort_keys=True, separators=(",", ":")) + "\n"


def write_pairs_csv(path: str | Path, rows: Sequence[PairedCount]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["task", "sketch", "wimp", "saving"])
        for r in rows:
            writer.writerow([r.task, r.sketch, r.wimp, r.saving])


def render_figures(directory: str | Path, rows: Sequence[PairedCount],
                   analysis: dict) -> list[Path]:
    """Two PNGs: per-task paired bars, and the mean saving with its CI."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out: list[Path] = []

    tasks = [r.task for r in rows]
    xs = range(len(rows))

    fig, ax = plt.subplots(figsize=(max(4.0, 0.9 * len(rows) + 2), 3.5))
    width = 0.38
    ax.bar([x - width / 2 for x in xs], [r.sketch for r in rows],
           width, label="pen", color="#3f7fbf")
    ax.bar([x + width / 2 for x in xs], [r.wimp for r in rows],
           width, label="toolbar", color="#bf7f3f")
    ax.set_xticks(list(xs), tasks, rotation=30, ha="right")
    ax.set_ylabel("actions per task")
    ax.legend(frameon=False)
    fig.tight_layout()
    path = directory / "actions_per_task.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    out.append(path)

    ci = analysis["savingCI"]
    fig, ax = plt.subplots(figsize=(4.0, 3.0))
    ax.errorbar([0], [analysis["meanSaving"]],
                yerr=[[analysis["meanSaving"] - ci["low"]],
                      [ci["high"] - analysis["meanSaving"]]],
                fmt="o", capsize=6, color="#33333f")
    ax.axhline(0.0, linewidth=0.8, color="#999999")
    ax.set_xlim(-1, 1)
    ax.set_xticks([])
    ax.set_ylabel("actions saved per task")
    ax.set_title(f"mean saving, {int((1 - ci['alpha']) * 100)}% bootstrap CI")
    fig.tight_layout()
    path = directory / "mean_saving_ci.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    out.append(path)

    return out
