"""reportplot: bench-CSV visualizer (trade-off chart + markdown report)."""

from .cli import ReportBundle, build_report
from .fig1chart import plot_fig1
from .report import render_report
from .schemas import SchemaError, Table, load_table

__version__ = "0.1.0"

__all__ = ["plot_fig1", "render_report", "load_table", "Table", "SchemaError",
           "ReportBundle", "build_report", "__version__"]
