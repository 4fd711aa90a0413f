"""Report assembly: figures plus an HTML page per run or sweep directory.

All outputs land next to the requested HTML path (figures in a figures/
subdirectory). Existing artifact files are never rewritten: rendering
only reads them and adds new output files.
"""

from __future__ import annotations

import html
from dataclasses import dataclass, field
from pathlib import Path

from . import figures
from .artifacts import (
    SERIES_COLUMNS,
    SNAPSHOT_COLUMNS,
    ReportError,
    SchemaError,
    read_fit_reports,
    read_series,
    read_summary,
    read_sweep_summary,
    snapshot_index,
)


@dataclass
class ReportManifest:
    """What a render produced: consumed run dirs, figures, the page."""

    run_dirs: list[Path]
    figures: list[dict] = field(default_factory=list)
    html: Path | None = None

    def validate(self) -> None:
        for fig in self.figures:
            schema = SNAPSHOT_COLUMNS if fig["kind"] == "interface_snapshots" else SERIES_COLUMNS
            for col in fig["source"]:
                if col not in schema:
                    raise SchemaError(
                        f"figure {fig['kind']!r} references unknown column {col!r}"
                    )


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _table(rows: list[tuple], header: tuple = ()) -> str:
    parts = ["<table>"]
    if header:
        parts.append(
            "<tr>" + "".join(f"<th>{html.escape(str(h))}</th>" for h in header) + "</tr>"
        )
    for row in rows:
        parts.append(
            "<tr>" + "".join(f"<td>{cell}</td>" for cell in row) + "</tr>"
        )
    parts.append("</table>")
    return "\n".join(parts)


def _esc_row(row: tuple) -> tuple:
    return tuple(html.escape(_fmt(cell)) for cell in row)


_STYLE = """
body { font-family: sans-serif; margin: 2em; max-width: 70em; }
table { border-collapse: collapse; margin: 0.6em 0; }
td, th { border: 1px solid #bbb; padding: 0.25em 0.6em; font-size: 0.9em; }
figure { display: inline-block; margin: 0.6em; }
figcaption { font-size: 0.85em; text-align: center; color: #444; }
img.thumb { height: 110px; }
"""


def _page(title: str, body: list[str]) -> str:
    return (
        "<!doctype html>\n<html><head><meta charset='utf-8'>"
        f"<title>{html.escape(title)}</title><style>{_STYLE}</style></head>\n"
        "<body>\n" + "\n".join(body) + "\n</body></html>\n"
    )


def _figure_block(entry: dict, base: Path) -> str:
    rel = Path(entry["file"]).relative_to(base)
    return (
        f"<figure><img src='{html.escape(str(rel))}' alt='{entry['kind']}'>"
        f"<figcaption>{html.escape(entry['kind'])}</figcaption></figure>"
    )


def _fit_section(kind: str, fit: dict) -> list[str]:
    rows = [(k, _fmt(v)) for k, v in sorted(fit.get("params", {}).items())]
    rows.append(("r_squared", _fmt(fit.get("r_squared"))))
    if fit.get("window"):
        rows.append(("window", _fmt(fit["window"][0]) + " .. " + _fmt(fit["window"][1])))
    if fit.get("selected"):
        rows.append(("selected", fit["selected"]))
    for key, val in sorted(fit.get("predicted", {}).items()):
        rows.append((f"predicted {key}", _fmt(val)))
    if fit.get("flags"):
        rows.append(("flags", ", ".join(fit["flags"])))
    return [f"<h3>fit: {html.escape(kind)}</h3>", _table([_esc_row(r) for r in rows])]


def _render_run(run_dir: Path, out_html: Path) -> ReportManifest:
    series = read_series(run_dir / "series.csv")
    summary = read_summary(run_dir / "summary.json")
    fits = read_fit_reports(run_dir)

    fig_dir = out_html.parent / "figures"
    fig_dir.mkdir(parents=True, exist_ok=True)
    manifest = ReportManifest(run_dirs=[run_dir], html=out_html)

    manifest.figures.append(figures.fig_energy(series, fig_dir / "energy.png"))
    model = summary.get("model", {})
    alpha = 1.0 / float(model.get("p", 1.0))
    if alpha < 1.0 or "extinction" in fits:
        manifest.figures.append(
            figures.fig_extinction_linearity(
                series, alpha, fits.get("extinction"), fig_dir / "extinction.png"
            )
        )
    manifest.figures.append(figures.fig_mode_amplitudes(series, fig_dir / "modes.png"))
    snaps = snapshot_index(summary, run_dir)
    if snaps:
        manifest.figures.append(
            figures.fig_interface_snapshots(snaps, fig_dir / "snapshots.png")
        )
    manifest.figures.append(
        figures.fig_center_trajectory(series, fig_dir / "center.png")
    )
    manifest.validate()

    events = ", ".join(
        f"{ev['kind']} @ t={_fmt(ev['time'])}" for ev in summary.get("events", [])
    ) or "none"
    info = [
        ("variant", model.get("variant", "?")),
        ("p", _fmt(model.get("p", "?"))),
        ("status", summary.get("status", "?")),
        ("events", events),
        ("final mass", _fmt(summary.get("final_mass"))),
        ("final energy", _fmt(summary.get("final_energy"))),
        ("config sha256", summary.get("config_sha256", "?")),
    ]
    body = [f"<h1>run report: {html.escape(run_dir.name)}</h1>"]
    body.append(_table([_esc_row(r) for r in info]))
    body.extend(_figure_block(f, out_html.parent) for f in manifest.figures)
    for kind, fit in sorted(fits.items()):
        body.extend(_fit_section(kind, fit))
    out_html.write_text(_page(f"run report: {run_dir.name}", body))
    return manifest


def _render_sweep(sweep_dir: Path, out_html: Path) -> ReportManifest:
    rows = read_sweep_summary(sweep_dir / "sweep_summary.csv")
    fig_dir = out_html.parent / "figures"
    fig_dir.mkdir(parents=True, exist_ok=True)
    manifest = ReportManifest(run_dirs=[], html=out_html)

    table_rows = []
    for row in rows:
        run_dir = sweep_dir / row["run"]
        cells = [html.escape(row[k]) for k in
                 ("run", "p", "beta_tilde", "c", "amplitude", "t_star", "K_fit", "events")]
        if (run_dir / "series.csv").is_file():
            series = read_series(run_dir / "series.csv")
            entry = figures.fig_energy_thumbnail(
                series, fig_dir / f"{row['run']}_energy.png"
            )
            manifest.figures.append(entry)
            manifest.run_dirs.append(run_dir)
            rel = Path(entry["file"]).relative_to(out_html.parent)
            cells.append(f"<img class='thumb' src='{html.escape(str(rel))}' alt='{row['run']}'>")
        else:
            cells.append("(no artifacts)")
        table_rows.append(tuple(cells))
    manifest.validate()

    body = [f"<h1>sweep overview: {html.escape(sweep_dir.name)}</h1>"]
    body.append(
        _table(
            table_rows,
            header=("run", "p", "beta_tilde", "c", "amplitude", "t_star", "K_fit",
                    "events", "energy"),
        )
    )
    out_html.write_text(_page(f"sweep overview: {sweep_dir.name}", body))
    return manifest


def render_report(target: Path, out_html: Path | None = None) -> ReportManifest:
    """Render a run or sweep directory; returns the manifest.

    A directory with sweep_summary.csv gets the overview page; one with
    series.csv gets the full single-run report. Anything else is an
    error. Artifacts are never modified; by default the page and its
    figures/ directory are added next to them.
    """
    target = Path(target)
    if not target.is_dir():
        raise ReportError(f"{target} is not a directory")
    out = Path(out_html) if out_html is not None else target / "report.html"
    if (target / "sweep_summary.csv").is_file():
        return _render_sweep(target, out)
    if (target / "series.csv").is_file():
        return _render_run(target, out)
    raise ReportError(
        f"{target} has neither series.csv nor sweep_summary.csv; nothing to report"
    )
