"""Batch report generation from simulation run directories.

Consumes only the documented on-disk formats (series.csv, snapshots/,
summary.json, fit_*.json, sweep_summary.csv); never imports the simulator.
"""

from .artifacts import (
    SERIES_COLUMNS,
    SNAPSHOT_COLUMNS,
    SWEEP_COLUMNS,
    EmptyInputError,
    ReportError,
    SchemaError,
)
from .report import ReportManifest, render_report

__all__ = [
    "SERIES_COLUMNS",
    "SNAPSHOT_COLUMNS",
    "SWEEP_COLUMNS",
    "ReportError",
    "SchemaError",
    "EmptyInputError",
    "ReportManifest",
    "render_report",
]
