"""Figure rendering for prodline CSV outputs."""

__version__ = "0.1.0"

from .figures import plot_histogram, plot_moments, read_histogram_csv, read_moments_csv

__all__ = ["plot_moments", "plot_histogram", "read_moments_csv", "read_histogram_csv"]
