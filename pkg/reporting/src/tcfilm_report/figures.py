"""Figure renderers: one PNG per call, returning its manifest entry.

Every renderer works from already-loaded artifact data; the manifest
entry records the figure kind, the source columns it consumed and the
output file, so the report page and the schema validator can both walk
the same list.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .artifacts import read_snapshot

_FIGSIZE = (4.8, 3.4)
_DPI = 110


def _entry(kind: str, source: tuple[str, ...], path: Path, **meta) -> dict:
    return {"kind": kind, "source": source, "file": str(path), **meta}


def _save(fig, path: Path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def fig_energy(series: dict, path: Path) -> dict:
    """Energy of the deviation vs time, log scale where positive."""
    t = series["t"]
    e = series["energy"]
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    pos = e > 0.0
    if pos.any():
        ax.semilogy(t[pos], e[pos], lw=1.2)
    else:
        ax.plot(t, e, lw=1.2)
    ax.set_xlabel("t")
    ax.set_ylabel("E")
    ax.set_title("energy decay")
    _save(fig, path)
    return _entry("energy", ("t", "energy"), path)


def fig_extinction_linearity(series: dict, alpha: float, fit: dict | None, path: Path) -> dict:
    """E^((1-alpha)/2) vs t; linear down to the extinction time.

    When a fit_extinction.json payload is given its line
    intercept - C_alpha * t is overlaid, hitting zero at t_star.
    """
    expo = 0.5 * (1.0 - alpha)
    t = series["t"]
    y = np.clip(series["energy"], 0.0, None) ** expo
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(t, y, lw=1.2, label="measured")
    overlay = False
    if fit is not None and {"C_alpha", "intercept", "t_star"} <= set(fit.get("params", {})):
        p = fit["params"]
        lo = fit.get("window", [t[0], p["t_star"]])[0]
        ts = np.linspace(lo, p["t_star"], 64)
        ax.plot(ts, p["intercept"] - p["C_alpha"] * ts, "--", lw=1.0, label="fitted line")
        ax.axvline(p["t_star"], color="0.6", lw=0.8)
        ax.legend(loc="best", fontsize=8)
        overlay = True
    ax.set_xlabel("t")
    ax.set_ylabel(f"E^{expo:g}")
    ax.set_title("extinction linearity")
    _save(fig, path)
    return _entry("extinction_linearity", ("t", "energy"), path, overlay=overlay)


def fig_mode_amplitudes(series: dict, path: Path) -> dict:
    """|a1| and |a2| vs t on log-log axes."""
    t = series["t"]
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    for re_col, im_col, label in (("re_a1", "im_a1", "|a1|"), ("re_a2", "im_a2", "|a2|")):
        amp = np.hypot(series[re_col], series[im_col])
        keep = (t > 0.0) & (amp > 0.0)
        if keep.any():
            ax.loglog(t[keep], amp[keep], lw=1.2, label=label)
    ax.set_xlabel("t")
    ax.set_ylabel("mode amplitude")
    ax.set_title("mode amplitudes")
    if ax.lines:
        ax.legend(loc="best", fontsize=8)
    _save(fig, path)
    return _entry(
        "mode_amplitudes", ("t", "re_a1", "im_a1", "re_a2", "im_a2"), path
    )


def fig_interface_snapshots(snapshots: list[tuple[float, Path]], path: Path, max_curves: int = 6) -> dict:
    """Stored interface states as polar curves r = h(theta)."""
    if len(snapshots) > max_curves:
        picks = np.linspace(0, len(snapshots) - 1, max_curves).round().astype(int)
        snapshots = [snapshots[i] for i in dict.fromkeys(picks.tolist())]
    fig, ax = plt.subplots(figsize=(4.2, 4.2), subplot_kw={"projection": "polar"})
    for t_snap, snap_path in snapshots:
        theta, h = read_snapshot(snap_path)
        theta = np.append(theta, theta[0] + 2.0 * np.pi)
        h = np.append(h, h[0])
        ax.plot(theta, h, lw=1.0, label=f"t={t_snap:g}")
    ax.set_title("interface snapshots")
    ax.legend(loc="upper right", bbox_to_anchor=(1.25, 1.1), fontsize=7)
    _save(fig, path)
    return _entry("interface_snapshots", ("theta", "h"), path, curves=len(snapshots))


def fig_center_trajectory(series: dict, path: Path) -> dict:
    """Path of the mode-1 coefficient: the spiral of the fitted center."""
    x = series["re_a1"]
    y = series["im_a1"]
    fig, ax = plt.subplots(figsize=(4.2, 4.2))
    ax.plot(x, y, lw=0.9)
    ax.plot(x[:1], y[:1], "o", ms=4, label="start")
    ax.plot(x[-1:], y[-1:], "s", ms=4, label="end")
    ax.set_xlabel("Re a1")
    ax.set_ylabel("Im a1")
    ax.set_title("center trajectory (mode 1)")
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(loc="best", fontsize=8)
    _save(fig, path)
    return _entry("center_trajectory", ("t", "re_a1", "im_a1"), path)


def fig_energy_thumbnail(series: dict, path: Path) -> dict:
    """Small energy-decay panel for sweep overview tables."""
    t = series["t"]
    e = series["energy"]
    fig, ax = plt.subplots(figsize=(2.4, 1.7))
    pos = e > 0.0
    if pos.any():
        ax.semilogy(t[pos], e[pos], lw=1.0)
    else:
        ax.plot(t, e, lw=1.0)
    ax.tick_params(labelsize=6)
    _save(fig, path)
    return _entry("energy", ("t", "energy"), path)
