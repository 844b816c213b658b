"""Command-line entry points: plot-moments and plot-histogram."""

from __future__ import annotations

import argparse
import sys

from .figures import plot_histogram, plot_moments


def _parser(what: str) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=f"plot-{what}",
        description=f"Render {what} figures from prodline CSV output.",
    )
    parser.add_argument("csv", nargs="+", help=f"{what}.csv file(s), one per run")
    parser.add_argument("--out", required=True, help="output image path (png, pdf, ...)")
    return parser


def main_moments(argv=None) -> int:
    args = _parser("moments").parse_args(argv)
    try:
        plot_moments(args.csv, args.out)
    except (ValueError, OSError) as exc:
        print(f"plot-moments: {exc}", file=sys.stderr)
        return 1
    return 0


def main_histogram(argv=None) -> int:
    args = _parser("histogram").parse_args(argv)
    try:
        plot_histogram(args.csv, args.out)
    except (ValueError, OSError) as exc:
        print(f"plot-histogram: {exc}", file=sys.stderr)
        return 1
    return 0
