"""Render production-line figures from simulator CSV files.

Consumes only the CSV contract of the prodline CLI (moments.csv and
histogram.csv); it never touches simulator internals, so the simulator is
fully usable without this package and vice versa. Figures are built on
explicit Figure objects with the Agg canvas, safe for headless batch use.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

__all__ = ["read_moments_csv", "read_histogram_csv", "plot_moments", "plot_histogram"]

MOMENTS_COLUMNS = (
    "t",
    "mean_w", "se_w",
    "mean_capacity", "se_capacity",
    "mean_q", "se_q",
    "mean_rho_b", "se_rho_b",
)
HISTOGRAM_COLUMNS = ("repairs", "frequency")

# (column, panel title) in figure order
_PANELS = (
    ("mean_w", "expected workload since last repair"),
    ("mean_capacity", "expected capacity"),
    ("mean_q", "expected queue length"),
    ("mean_rho_b", "expected density at the outlet"),
)


def _read_csv(path, expected_columns) -> dict[str, np.ndarray]:
    lines = Path(path).read_text().strip().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty file")
    header = tuple(lines[0].split(","))
    for name in expected_columns:
        if name not in header:
            raise ValueError(f"{path}: missing column {name!r}")
    for name in header:
        if name not in expected_columns:
            raise ValueError(f"{path}: unexpected column {name!r}")
    rows = [line.split(",") for line in lines[1:]]
    if any(len(row) != len(header) for row in rows):
        raise ValueError(f"{path}: ragged rows")
    data = np.array([[float(x) for x in row] for row in rows])
    return {name: data[:, i] for i, name in enumerate(header)}


def read_moments_csv(path) -> dict[str, np.ndarray]:
    """Load a moments.csv produced by the simulator CLI."""
    return _read_csv(path, MOMENTS_COLUMNS)


def read_histogram_csv(path) -> dict[str, np.ndarray]:
    """Load a histogram.csv produced by the simulator CLI."""
    return _read_csv(path, HISTOGRAM_COLUMNS)


def _run_label(path) -> str:
    path = Path(path)
    return path.parent.name or path.stem


def plot_moments(paths, out_path=None) -> Figure:
    """Four-panel figure of the first-order moment curves, one line per run.

    All runs must share the time grid. When out_path is given the figure is
    also written there (any extension matplotlib supports).
    """
    if not paths:
        raise ValueError("need at least one moments.csv")
    runs = [(str(p), read_moments_csv(p)) for p in paths]
    t0 = runs[0][1]["t"]
    for name, data in runs[1:]:
        if data["t"].shape != t0.shape or not np.array_equal(data["t"], t0):
            raise ValueError(f"{name}: time grid differs from {runs[0][0]}")

    fig = Figure(figsize=(11, 7.5))
    FigureCanvasAgg(fig)
    axes = fig.subplots(2, 2).ravel()
    for ax, (column, title) in zip(axes, _PANELS):
        for name, data in runs:
            ax.plot(data["t"], data[column], lw=1.2, label=_run_label(name))
        ax.set_title(title)
        ax.set_xlabel("time")
        ax.grid(True, alpha=0.3)
    axes[0].legend(loc="best")
    fig.suptitle("Production line: first-order moments")
    fig.tight_layout()
    if out_path is not None:
        fig.savefig(out_path, dpi=150)
    return fig


def plot_histogram(paths, out_path=None) -> Figure:
    """Repair-count distributions, one bar subplot per run.

    Frequencies that do not sum to 1 within 1e-9 get a warning annotation on
    the affected subplot rather than an error.
    """
    if not paths:
        raise ValueError("need at least one histogram.csv")
    runs = [(str(p), read_histogram_csv(p)) for p in paths]

    fig = Figure(figsize=(5.5 * len(runs), 4.2))
    FigureCanvasAgg(fig)
    axes = np.atleast_1d(fig.subplots(1, len(runs)))
    for ax, (name, data) in zip(axes, runs):
        ax.bar(data["repairs"], data["frequency"], width=0.8, color="tab:blue")
        ax.set_title(_run_label(name))
        ax.set_xlabel("repairs in horizon")
        ax.set_ylabel("relative frequency")
        total = float(data["frequency"].sum())
        if abs(total - 1.0) > 1e-9:
            ax.text(
                0.5, 0.95, f"warning: frequencies sum to {total:.6g}",
                transform=ax.transAxes, ha="center", va="top", color="tab:red",
            )
    fig.suptitle("Distribution of the number of repairs")
    fig.tight_layout()
    if out_path is not None:
        fig.savefig(out_path, dpi=150)
    return fig
