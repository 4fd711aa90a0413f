"""Readers for the run-directory file formats.

The simulation CLI lays a run directory out as

    series.csv        t,mass,energy,diss_cum,min_h,re_a1,im_a1,re_a2,im_a2
    snapshots/*.csv   theta,h rows per stored state, indexed in summary.json
    summary.json      model/initial/solver echo, events, final diagnostics
    fit_<kind>.json   fit parameters, window, r_squared, predictions

and a sweep directory as run_*/ subdirectories plus

    sweep_summary.csv run,p,beta_tilde,c,amplitude,t_star,K_fit,events

Schema violations raise SchemaError naming the offending column; files
with a valid header but no data rows raise EmptyInputError.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

SERIES_COLUMNS = ("t", "mass", "energy", "diss_cum", "min_h", "re_a1", "im_a1", "re_a2", "im_a2")
SNAPSHOT_COLUMNS = ("theta", "h")
SWEEP_COLUMNS = ("run", "p", "beta_tilde", "c", "amplitude", "t_star", "K_fit", "events")


class ReportError(Exception):
    """Base for everything this package raises on bad input."""


class SchemaError(ReportError):
    """A CSV header does not match the documented schema."""


class EmptyInputError(ReportError):
    """A well-formed file carries no data rows."""


def _check_header(got: list[str], want: tuple[str, ...], name: str) -> None:
    missing = [c for c in want if c not in got]
    if missing:
        raise SchemaError(f"{name} is missing column(s) {missing}")
    extra = [c for c in got if c not in want]
    if extra:
        raise SchemaError(f"{name} has unknown column(s) {extra}")
    if tuple(got) != want:
        raise SchemaError(f"{name} columns are out of order: {got}; want {list(want)}")


def read_series(path: Path) -> dict[str, np.ndarray]:
    """series.csv as named float arrays (strict header, at least one row)."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path.name} has no header row") from None
        _check_header(header, SERIES_COLUMNS, path.name)
        try:
            data = np.array([[float(x) for x in row] for row in reader])
        except ValueError as exc:
            raise SchemaError(f"{path.name} has a non-numeric cell: {exc}") from exc
    if data.size == 0:
        raise EmptyInputError(f"{path.name} has a header but no data rows")
    return {name: data[:, i] for i, name in enumerate(SERIES_COLUMNS)}


def read_summary(path: Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{Path(path).name} is not valid JSON: {exc}") from exc


def read_snapshot(path: Path) -> tuple[np.ndarray, np.ndarray]:
    """One snapshots/*.csv file as (theta, h) arrays."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path.name} has no header row") from None
        _check_header(header, SNAPSHOT_COLUMNS, path.name)
        data = np.array([[float(x) for x in row] for row in reader])
    if data.size == 0:
        raise EmptyInputError(f"{path.name} has a header but no data rows")
    return data[:, 0], data[:, 1]


def snapshot_index(summary: dict, run_dir: Path) -> list[tuple[float, Path]]:
    """(time, absolute path) pairs from the summary's snapshot index."""
    out = []
    for entry in summary.get("snapshots", []):
        out.append((float(entry["t"]), Path(run_dir) / entry["file"]))
    return out


def read_fit_reports(run_dir: Path) -> dict[str, dict]:
    """All fit_<kind>.json files present, keyed by kind."""
    out = {}
    for path in sorted(Path(run_dir).glob("fit_*.json")):
        payload = read_summary(path)
        out[path.stem.removeprefix("fit_")] = payload
    return out


def read_sweep_summary(path: Path) -> list[dict[str, str]]:
    """sweep_summary.csv rows as dicts of strings (strict header)."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path.name} has no header row") from None
        _check_header(header, SWEEP_COLUMNS, path.name)
        rows = [dict(zip(SWEEP_COLUMNS, row)) for row in reader]
    if not rows:
        raise EmptyInputError(f"{path.name} has a header but no data rows")
    return rows
