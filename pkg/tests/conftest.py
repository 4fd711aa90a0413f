"""Path setup and the acceptance summary hook."""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import support


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if support._ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in support._ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
