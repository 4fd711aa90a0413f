"""Format readers: schema enforcement and golden-run round trips."""

import csv

import numpy as np
import pytest

from tcfilm_report.artifacts import (
    SERIES_COLUMNS,
    SWEEP_COLUMNS,
    EmptyInputError,
    SchemaError,
    read_fit_reports,
    read_series,
    read_snapshot,
    read_summary,
    read_sweep_summary,
    snapshot_index,
)


def test_read_series_golden(golden_copy):
    series = read_series(golden_copy / "series.csv")
    assert set(SERIES_COLUMNS) <= set(series)
    assert series["t"].size == 501
    assert series["t"][0] == 0.0
    assert series["t"][-1] == pytest.approx(0.1, rel=1e-12)
    assert np.all(np.diff(series["t"]) > 0.0)
    # the golden run extinguishes, so energy collapses by orders of magnitude
    assert series["energy"][-1] < 1e-6 * series["energy"][0]


def test_missing_column_is_named(golden_copy, drop_series_column):
    drop_series_column(golden_copy / "series.csv", "im_a1")
    with pytest.raises(SchemaError, match="im_a1"):
        read_series(golden_copy / "series.csv")


def test_unknown_column_is_named(golden_copy):
    path = golden_copy / "series.csv"
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    rows[0].append("bogus")
    for row in rows[1:]:
        row.append("0")
    with open(path, "w", newline="") as fh:
        csv.writer(fh).writerows(rows)
    with pytest.raises(SchemaError, match="bogus"):
        read_series(path)


def test_reordered_columns_rejected(golden_copy):
    path = golden_copy / "series.csv"
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    for row in rows:
        row[0], row[1] = row[1], row[0]
    with open(path, "w", newline="") as fh:
        csv.writer(fh).writerows(rows)
    with pytest.raises(SchemaError, match="order"):
        read_series(path)


def test_header_only_series_is_empty_input(tmp_path):
    path = tmp_path / "series.csv"
    path.write_text(",".join(SERIES_COLUMNS) + "\n")
    with pytest.raises(EmptyInputError):
        read_series(path)


def test_non_numeric_cell_rejected(golden_copy):
    path = golden_copy / "series.csv"
    lines = path.read_text().splitlines()
    lines[1] = lines[1].replace(lines[1].split(",")[1], "not-a-number", 1)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(SchemaError, match="non-numeric"):
        read_series(path)


def test_snapshots_via_summary_index(golden_copy):
    summary = read_summary(golden_copy / "summary.json")
    index = snapshot_index(summary, golden_copy)
    assert len(index) >= 3
    times = [t for t, _ in index]
    assert times == sorted(times)
    theta, h = read_snapshot(index[0][1])
    assert theta.size == h.size == 32
    assert h == pytest.approx(1.0 + 0.01 * np.cos(2 * theta), abs=1e-12)


def test_snapshot_schema_checked(tmp_path):
    path = tmp_path / "snap.csv"
    path.write_text("theta,height\n0,1\n")
    with pytest.raises(SchemaError, match="h"):
        read_snapshot(path)


def test_fit_reports_golden(golden_copy):
    fits = read_fit_reports(golden_copy)
    assert set(fits) == {"extinction"}
    rep = fits["extinction"]
    assert rep["kind"] == "extinction"
    assert rep["r_squared"] >= 0.99
    assert {"C_alpha", "intercept", "t_star"} <= set(rep["params"])


def test_sweep_summary_round_trip(tmp_path):
    path = tmp_path / "sweep_summary.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SWEEP_COLUMNS)
        w.writerow(["run_0000", "2", "", "1", "0.01", "0.062", "", "extinction+t_end"])
        w.writerow(["run_0001", "0.5", "", "1", "0.01", "", "", "t_end"])
    rows = read_sweep_summary(path)
    assert [r["run"] for r in rows] == ["run_0000", "run_0001"]
    assert rows[0]["t_star"] == "0.062"
    assert rows[1]["events"] == "t_end"


def test_sweep_summary_schema_and_empty(tmp_path):
    path = tmp_path / "sweep_summary.csv"
    path.write_text("run,p,beta_tilde,c,amplitude,t_star,events\n")
    with pytest.raises(SchemaError, match="K_fit"):
        read_sweep_summary(path)
    path.write_text(",".join(SWEEP_COLUMNS) + "\n")
    with pytest.raises(EmptyInputError):
        read_sweep_summary(path)
