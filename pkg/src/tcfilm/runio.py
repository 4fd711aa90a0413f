"""Run artifacts on disk: series.csv, snapshots/*.csv, summary.json, fit_*.json.

Everything written here is byte-reproducible from the config: floats are
printed with 17 significant digits (round-trip exact for IEEE doubles),
column order is fixed, JSON keys are sorted, and no timestamps or host
details leak in.

    series.csv      t,mass,energy,diss_cum,min_h,re_a1,im_a1,re_a2,im_a2
    snapshots/      snap_00000.csv ... with columns theta,h
    summary.json    config hash, events, final mass/energy, balance residual
    fit_<kind>.json FitReport fields
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path

import numpy as np

from .asymptotics import FitReport, TimeSeries
from .errors import ConfigError
from .stepping import Trajectory

__all__ = [
    "SERIES_COLUMNS",
    "write_series",
    "read_series",
    "write_snapshots",
    "write_summary",
    "read_summary",
    "write_fit_report",
    "config_hash",
]

SERIES_COLUMNS = ("t", "mass", "energy", "diss_cum", "min_h", "re_a1", "im_a1", "re_a2", "im_a2")


def _fmt(x: float) -> str:
    return "%.17g" % float(x)


def config_hash(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


def write_series(path: Path, traj: Trajectory, stride: int = 1) -> int:
    """Write every stride-th diagnostics row (plus the last); returns row count."""
    d = traj.diagnostics
    rows = list(range(0, len(d.t), stride))
    if rows[-1] != len(d.t) - 1:
        rows.append(len(d.t) - 1)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SERIES_COLUMNS)
        for i in rows:
            w.writerow(
                [
                    _fmt(d.t[i]),
                    _fmt(d.mass[i]),
                    _fmt(d.energy[i]),
                    _fmt(d.diss_cum[i]),
                    _fmt(d.min_h[i]),
                    _fmt(d.a1[i].real),
                    _fmt(d.a1[i].imag),
                    _fmt(d.a2[i].real),
                    _fmt(d.a2[i].imag),
                ]
            )
    return len(rows)


def read_series(path: Path) -> dict[str, np.ndarray]:
    """Columns of series.csv as arrays, with a1/a2 reassembled as complex."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != SERIES_COLUMNS:
            raise ConfigError(
                f"unexpected series.csv header {header}; want {list(SERIES_COLUMNS)}"
            )
        data = np.array([[float(x) for x in row] for row in reader])
    if data.size == 0:
        data = data.reshape(0, len(SERIES_COLUMNS))
    out = {name: data[:, i] for i, name in enumerate(SERIES_COLUMNS)}
    out["a1"] = out["re_a1"] + 1j * out["im_a1"]
    out["a2"] = out["re_a2"] + 1j * out["im_a2"]
    return out


def series_timeseries(series: dict[str, np.ndarray], column: str) -> TimeSeries:
    return TimeSeries(series["t"], series[column])


def write_snapshots(dirpath: Path, traj: Trajectory) -> list[dict]:
    """One theta,h CSV per stored snapshot; returns the {file, t} index."""
    dirpath.mkdir(parents=True, exist_ok=True)
    index = []
    for i, (t, snap) in enumerate(zip(traj.snapshot_times, traj.snapshots)):
        name = f"snap_{i:05d}.csv"
        theta = snap.theta
        with open(dirpath / name, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["theta", "h"])
            for th, hv in zip(theta, snap.values):
                w.writerow([_fmt(th), _fmt(hv)])
        index.append({"file": f"snapshots/{name}", "t": float(t)})
    return index


def write_summary(
    path: Path,
    traj: Trajectory,
    cfg_hash: str,
    model: dict,
    initial: dict,
    solver: dict,
    snapshot_index: list[dict],
) -> dict:
    d = traj.diagnostics
    summary = {
        "config_sha256": cfg_hash,
        "status": traj.status,
        "events": [{"kind": ev.kind, "time": ev.time} for ev in traj.events],
        "final_mass": d.mass[-1],
        "final_energy": d.energy[-1],
        "max_energy_balance_residual": d.balance_residual(),
        "model": model,
        "initial": initial,
        "solver": solver,
        "snapshots": snapshot_index,
    }
    path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary


def read_summary(path: Path) -> dict:
    return json.loads(Path(path).read_text())


def write_fit_report(path: Path, report: FitReport) -> dict:
    def clean(x):
        if isinstance(x, float) and math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x

    payload = {
        "kind": report.kind,
        "params": {k: clean(v) for k, v in report.params.items()},
        "predicted": {k: clean(v) for k, v in report.predicted.items()},
        "window": list(report.window),
        "r_squared": report.r_squared,
        "flags": list(report.flags),
        "selected": report.selected,
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return payload
