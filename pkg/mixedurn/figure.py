"""Regenerates the three histogram panels of the mixed-urn figure.

All panels start from one yellow and one blue ball with alpha = beta =
gamma = 1:

- left: pure Polya (p = 0), 2000 steps, flat histogram
- center: p = 0.05 after 2000 steps, still spread over [0, 1]
- right: p = 0.05 after 2e7 steps, visibly concentrated around 1/2

Panels are written as histogram CSVs. Rendering is left to the generated
plot_figure.py, which needs matplotlib but is never imported here.
"""

import logging
import math
from os import path
from typing import Optional

from mixedurn.constants import (
    FIGURE_MIN_CONCENTRATION_GAIN,
    FIGURE_PANELS,
    FIGURE_SUMMARY_FILE,
    FIGURE_URN,
    HISTOGRAM_COLUMNS,
    KS_UNIFORM_THRESHOLD,
    PLOT_SCRIPT_FILE,
)
from mixedurn.engine import sample_proportions, summarize_checkpoint
from mixedurn.errors import ParameterError
from mixedurn.export import histogram_rows, output_dir, write_csv, write_json
from mixedurn.model import CheckResult, FigurePanel, FigureSummary, UrnParams
from mixedurn.stats import Ecdf, ks_statistic, uniform_cdf
from mixedurn.theory import limit_cdf, polya_limit_params

logger = logging.getLogger(__name__)

PLOT_SCRIPT = '''"""Draws the three mixed-urn histogram panels written next to this file."""

import csv
from os import path

import matplotlib.pyplot as plt

HERE = path.dirname(path.abspath(__file__))
PANELS = [
    ("left", "p = 0, n = {left_steps}"),
    ("center", "p = 0.05, n = {center_steps}"),
    ("right", "p = 0.05, n = {right_steps}"),
]


def read_panel(name):
    with open(path.join(HERE, f"panel_{{name}}.csv"), newline="") as f:
        rows = list(csv.DictReader(f))
    lefts = [float(row["bin_left"]) for row in rows]
    widths = [float(row["bin_right"]) - float(row["bin_left"]) for row in rows]
    counts = [int(row["count"]) for row in rows]
    return lefts, widths, counts


def main():
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.5), sharey=False)
    for ax, (name, title) in zip(axes, PANELS):
        lefts, widths, counts = read_panel(name)
        ax.bar(lefts, counts, width=widths, align="edge", color="0.3")
        ax.set_xlim(0, 1)
        ax.set_title(title)
        ax.set_xlabel("X_n")
    fig.tight_layout()
    fig.savefig(path.join(HERE, "figure.png"), dpi=150)


if __name__ == "__main__":
    main()
'''


def _panel(
    name: str,
    p: float,
    steps: int,
    replicates: int,
    seed: int,
    bins: int,
    out: str,
    workers: Optional[int],
) -> FigurePanel:
    params = UrnParams(**FIGURE_URN, p=p)
    logger.info(f"panel {name}: p={p}, {replicates} replicates x {steps} steps")
    xs = sample_proportions(params, steps, replicates, seed, [steps], workers)[:, 0]
    summary = summarize_checkpoint(steps, xs, bins)
    ecdf = Ecdf.from_samples(xs)
    # only the pure Polya panel has a continuous limit law to compare with
    limit = limit_cdf(params) if polya_limit_params(params) is not None else None
    ks_limit = ks_statistic(ecdf, limit) if limit is not None else None
    write_csv(
        path.join(out, f"panel_{name}.csv"),
        HISTOGRAM_COLUMNS,
        histogram_rows(steps, summary.histogram),
    )
    return FigurePanel(
        name=name,
        p=p,
        steps=steps,
        replicates=replicates,
        mean=summary.moments.mean,
        variance=summary.moments.variance,
        mass_near_half=summary.mass_near_half,
        ks_uniform=ks_statistic(ecdf, uniform_cdf),
        ks_limit=ks_limit,
    )


def figure_checks(panels: dict[str, FigurePanel]) -> list[CheckResult]:
    left, center, right = panels["left"], panels["center"], panels["right"]
    gain = right.mass_near_half - center.mass_near_half
    left_ks = left.ks_limit if left.ks_limit is not None else math.inf
    return [
        CheckResult(
            name="left_uniform_ks",
            passed=left_ks < KS_UNIFORM_THRESHOLD,
            statistic=left_ks,
            threshold=KS_UNIFORM_THRESHOLD,
        ),
        CheckResult(
            name="center_spread",
            passed=center.mass_near_half < 0.5,
            statistic=center.mass_near_half,
            threshold=0.5,
        ),
        CheckResult(
            name="right_concentration_gain",
            passed=gain >= FIGURE_MIN_CONCENTRATION_GAIN,
            statistic=gain,
            threshold=FIGURE_MIN_CONCENTRATION_GAIN,
            detail=f"right {right.mass_near_half:.4f} vs center {center.mass_near_half:.4f}",
        ),
    ]


def reproduce_figure(
    seed: int,
    out: str,
    bins: int,
    workers: Optional[int] = None,
    right_replicates: Optional[int] = None,
    right_steps: Optional[int] = None,
    plot_script: bool = True,
) -> FigureSummary:
    """Simulate the panels, write their CSVs and summary, and check their ordering.

    right_replicates / right_steps scale down the expensive right panel;
    the checks are still run, but with fewer steps the concentration gain
    may not reach its threshold.
    """
    if bins < 1:
        raise ParameterError(f"bins must be at least 1, got {bins}")
    out = output_dir(out)
    panels = {}
    for name, panel in FIGURE_PANELS.items():
        steps = panel["steps"]
        replicates = panel["replicates"]
        if name == "right":
            steps = right_steps or steps
            replicates = right_replicates or replicates
        panels[name] = _panel(
            name, panel["p"], steps, replicates, seed, bins, out, workers
        )

    checks = figure_checks(panels)
    summary = FigureSummary(
        seed=seed,
        panels=list(panels.values()),
        checks=checks,
        passed=all(check.passed for check in checks),
    )
    write_json(path.join(out, FIGURE_SUMMARY_FILE), summary)
    if plot_script:
        script = path.join(out, PLOT_SCRIPT_FILE)
        with open(script, "w") as f:
            f.write(
                PLOT_SCRIPT.format(
                    left_steps=panels["left"].steps,
                    center_steps=panels["center"].steps,
                    right_steps=panels["right"].steps,
                )
            )
        logger.info(f"wrote {script}")
    if not summary.passed:
        failed = [check.name for check in checks if not check.passed]
        logger.warning(f"figure checks did not hold: {', '.join(failed)}")
    return summary
