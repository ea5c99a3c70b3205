"""Render sweep results to a figure file next to the CSV output.

Analytic curves are drawn as lines and numeric values as dots, both
normalised, matching the presentation of the datasets this tool
reproduces.  Distance sweeps are plotted against the midpoint distance
(d_L + l_L/2) - (d_R + l_R/2).
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .sweep import RunConfig, SweepRow

_AXIS_LABELS = {"delta_d": r"$(d_L + \ell_L/2) - (d_R + \ell_R/2)$",
                "delta_T": r"$\Delta T / \eta$",
                "delta_mu": r"$\Delta\mu / \eta$"}


def _x_values(config: RunConfig, rows: list[SweepRow]) -> list[float]:
    xs = [row.sweep_value for row in rows]
    if config.sweep_kind == "distance":
        shift = 0.5 * (config.ell_left - config.ell_right)
        xs = [x + shift for x in xs]
    return xs


def render_panel(series: list[tuple[str, RunConfig, list[SweepRow]]],
                 path: str, title: str = "") -> str:
    """One panel: every (series, measure) pair as an analytic line + numeric dots."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    idx = 0
    for label, config, rows in series:
        ok = [row for row in rows if row.error is None]
        xs = _x_values(config, ok)
        for spec in config.measures:
            color = colors[idx % len(colors)]
            idx += 1
            ana = [row.values[spec.label]["analytic_norm"] for row in ok]
            num = [row.values[spec.label]["numeric_norm"] for row in ok]
            name = f"{label} {spec.label}" if label else spec.label
            if any(not math.isnan(v) for v in ana):
                ax.plot(xs, ana, "-", color=color, label=name)
            if any(not math.isnan(v) for v in num):
                ax.plot(xs, num, "o", color=color, markersize=3.5,
                        label=None if any(not math.isnan(v) for v in ana)
                        else name)
    ax.set_xlabel(_AXIS_LABELS[series[0][1].sweep_column])
    ax.set_ylabel("normalized value")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8, frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)
    return path
