"""Shared fixtures: golden-run copies, CSV corruption, checksums.

Helpers are exposed as fixtures rather than module imports so this
conftest never clashes with the simulator suite's when both run in one
pytest session.
"""

import csv
import hashlib
import shutil
from pathlib import Path

import pytest

GOLDEN = Path(__file__).resolve().parent / "golden_run"

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def golden_path() -> Path:
    return GOLDEN


@pytest.fixture
def golden_copy(tmp_path) -> Path:
    """A disposable copy of the golden run directory."""
    dst = tmp_path / "run"
    shutil.copytree(GOLDEN, dst)
    return dst


@pytest.fixture
def drop_series_column():
    """Rewrite a CSV with one named column removed."""

    def drop(path: Path, name: str) -> None:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        idx = rows[0].index(name)
        with open(path, "w", newline="") as fh:
            csv.writer(fh).writerows(
                [cell for i, cell in enumerate(row) if i != idx] for row in rows
            )

    return drop


@pytest.fixture
def tree_digests():
    """SHA-256 of every file under a directory, keyed by relative path."""

    def digests(root: Path) -> dict[str, str]:
        out = {}
        for p in sorted(Path(root).rglob("*")):
            if p.is_file():
                out[str(p.relative_to(root))] = hashlib.sha256(p.read_bytes()).hexdigest()
        return out

    return digests


@pytest.fixture
def record_acceptance():
    def record(name: str, ok: bool, detail: str) -> bool:
        _ACCEPTANCE_LINES.append(f"{name}: {'PASS' if ok else 'FAIL'} - {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria (report tool)")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
