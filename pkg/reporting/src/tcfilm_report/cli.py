"""Command-line front end.

    tcfilm-report DIR [--out report.html]

Renders the figures and HTML page for one run directory, or the
overview page for a sweep directory. Exit codes: 0 success, 2 schema
mismatch or unreadable input, 3 empty input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .artifacts import EmptyInputError, ReportError
from .report import render_report

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_EMPTY = 3


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="tcfilm-report",
        description="static HTML/figure report from a run or sweep directory",
    )
    parser.add_argument("dir", help="run or sweep directory")
    parser.add_argument("--out", default=None, help="output HTML path (default DIR/report.html)")
    args = parser.parse_args(argv)
    try:
        manifest = render_report(Path(args.dir), None if args.out is None else Path(args.out))
    except EmptyInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (ReportError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    print(f"wrote {manifest.html} and {len(manifest.figures)} figure(s)")
    return EXIT_OK


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
