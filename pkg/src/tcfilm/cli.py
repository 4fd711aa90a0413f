"""Command-line front end.

    tcfilm run    -c CONFIG -o DIR      integrate one configuration
    tcfilm sweep  -c CONFIG -o DIR      grid of runs + sweep_summary.csv
    tcfilm fit    --kind KIND DIR       fit_<kind>.json from a run directory
    tcfilm regime -c CONFIG             dimensionless groups as JSON

Configs are TOML.  A run config has [model], [initial], [solver] and
optional [output] / [sweep] tables; a regime config has [physical].
Exit codes: 0 success, 2 invalid config, 3 touchdown, 4 blowup,
5 insufficient data for a fit, 6 unsupported scaling regime.
TCFILM_THREADS caps sweep parallelism.
"""

from __future__ import annotations

import argparse
import copy
import csv
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import runio
from .asymptotics import (
    TimeSeries,
    extinction_window,
    fit_extinction,
    fit_spiral,
    manifold_ratio,
    spiral_window,
)
from .errors import (
    BlowupError,
    ConfigError,
    InsufficientDataError,
    PositivityError,
    TcfilmError,
)
from .models import ModelSpec
from .rheology import ConstitutiveLaw
from .scaling import PhysicalSetup, nondimensionalize
from .spectral_core import PeriodicField, grid
from .stepping import SolverConfig, advance

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_TOUCHDOWN = 3
EXIT_BLOWUP = 4
EXIT_INSUFFICIENT = 5
EXIT_UNSUPPORTED = 6


def _load_toml(path: str) -> tuple[dict, bytes]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        return tomllib.loads(raw.decode("utf-8")), raw
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config {path}: {exc}") from exc


def _require(table: dict, key: str, section: str):
    if key not in table:
        raise ConfigError(f"[{section}] is missing required key {key!r}")
    return table[key]


def _model_from_cfg(cfg: dict) -> ModelSpec:
    table = _require(cfg, "model", "config")
    variant = _require(table, "variant", "model")
    p = float(table.get("p", 1.0))
    kind = "newtonian" if variant == "newtonian_pv1" else "power_law"
    law = ConstitutiveLaw(p, kind)
    kwargs = {}
    if "beta_tilde" in table:
        kwargs["beta_tilde"] = float(table["beta_tilde"])
    if "c_shear" in table:
        kwargs["c_shear"] = float(table["c_shear"])
    if "c_surf" in table:
        kwargs["c_surf"] = float(table["c_surf"])
    if "eps_mol" in table:
        kwargs["eps_mol"] = float(table["eps_mol"])
    if "h_bar0" in table:
        from .rheology import MobilityCutoff

        kwargs["cutoff"] = MobilityCutoff(float(table["h_bar0"]), law.alpha)
    return ModelSpec(variant, law, **kwargs)


def _initial_from_cfg(cfg: dict) -> tuple[PeriodicField, dict]:
    table = _require(cfg, "initial", "config")
    n = int(_require(table, "n", "initial"))
    c = float(_require(table, "c", "initial"))
    modes = table.get("modes", [])
    theta = grid(n)
    h = np.full(n, c)
    total_amp = 0.0
    for mode in modes:
        kk = int(_require(mode, "n", "initial.modes"))
        amp = float(_require(mode, "amplitude", "initial.modes"))
        phase = float(mode.get("phase", 0.0))
        h = h + amp * np.cos(kk * theta + phase)
        total_amp += abs(amp)
    tail_amp = float(table.get("tail_amplitude", 0.0))
    seed = table.get("seed")
    if tail_amp > 0.0:
        if seed is None:
            raise ConfigError("[initial] tail_amplitude needs a seed")
        rng = np.random.default_rng(int(seed))
        for kk in range(3, n // 3 + 1):
            amp = tail_amp * rng.uniform()
            phase = rng.uniform(0.0, 2.0 * np.pi)
            h = h + amp * np.cos(kk * theta + phase)
            total_amp += abs(amp)
    if c - total_amp <= 0.0:
        raise ConfigError(
            f"[initial] mean c = {c} does not dominate mode amplitudes "
            f"(sum {total_amp}); thickness could touch zero"
        )
    resolved = {
        "n": n,
        "c": c,
        "modes": [
            {
                "n": int(m["n"]),
                "amplitude": float(m["amplitude"]),
                "phase": float(m.get("phase", 0.0)),
            }
            for m in modes
        ],
        "seed": None if seed is None else int(seed),
        "tail_amplitude": tail_amp,
    }
    return PeriodicField(h), resolved


def _solver_from_cfg(cfg: dict) -> SolverConfig:
    table = _require(cfg, "solver", "config")
    known = {
        "scheme",
        "dt0",
        "cfl",
        "t_end",
        "tol_extinction",
        "h_min",
        "output_stride",
    }
    unknown = set(table) - known
    if unknown:
        raise ConfigError(f"[solver] has unknown keys {sorted(unknown)}")
    kwargs = dict(table)
    for key in ("dt0", "cfl", "t_end", "tol_extinction", "h_min"):
        if key in kwargs:
            kwargs[key] = float(kwargs[key])
    if "output_stride" in kwargs:
        kwargs["output_stride"] = int(kwargs["output_stride"])
    return SolverConfig(**kwargs)


def _model_summary(spec: ModelSpec) -> dict:
    return {
        "variant": spec.variant,
        "p": spec.law.p,
        "kind": spec.law.kind,
        "beta_tilde": spec.beta_tilde,
        "c_shear": spec.c_shear,
        "c_surf": spec.c_surf,
        "eps_mol": spec.eps_mol,
        "h_bar0": None if spec.cutoff is None else spec.cutoff.h_bar0,
    }


def _solver_summary(sol: SolverConfig) -> dict:
    return {
        "scheme": sol.scheme,
        "dt0": sol.dt0,
        "cfl": sol.cfl,
        "t_end": sol.t_end,
        "tol_extinction": sol.tol_extinction,
        "h_min": sol.h_min,
        "output_stride": sol.output_stride,
    }


def _execute_run(cfg: dict, raw: bytes, out_dir: Path) -> int:
    spec = _model_from_cfg(cfg)
    h0, initial = _initial_from_cfg(cfg)
    sol = _solver_from_cfg(cfg)
    traj = advance(spec, h0, sol)
    out_dir.mkdir(parents=True, exist_ok=True)
    stride = int(cfg.get("output", {}).get("stride", 1))
    runio.write_series(out_dir / "series.csv", traj, stride)
    index = runio.write_snapshots(out_dir / "snapshots", traj)
    runio.write_summary(
        out_dir / "summary.json",
        traj,
        runio.config_hash(raw),
        _model_summary(spec),
        initial,
        _solver_summary(sol),
        index,
    )
    return EXIT_TOUCHDOWN if traj.status == "touchdown" else EXIT_OK


def cmd_run(config_path: str, out_dir: str) -> int:
    try:
        cfg, raw = _load_toml(config_path)
        return _execute_run(cfg, raw, Path(out_dir))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PositivityError as exc:
        # thickness crossed zero inside a step, before the h_min monitor
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOUCHDOWN
    except BlowupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BLOWUP


_SWEEP_KEYS = ("p", "beta_tilde", "c", "amplitude")


def _sweep_grid(cfg: dict) -> list[dict]:
    table = cfg.get("sweep")
    if not table:
        raise ConfigError("sweep needs a non-empty [sweep] table")
    unknown = set(table) - set(_SWEEP_KEYS)
    if unknown:
        raise ConfigError(f"[sweep] has unknown keys {sorted(unknown)}")
    axes = []
    for key in _SWEEP_KEYS:
        vals = table.get(key)
        if vals is None:
            axes.append([None])
        else:
            if not isinstance(vals, list) or not vals:
                raise ConfigError(f"[sweep] {key} must be a non-empty list")
            axes.append([float(v) for v in vals])
    points = [dict(zip(_SWEEP_KEYS, combo)) for combo in itertools.product(*axes)]
    if all(v is None for point in points for v in point.values()):
        raise ConfigError("[sweep] table lists no parameters")
    return points


def _apply_point(cfg: dict, point: dict) -> dict:
    out = copy.deepcopy(cfg)
    if point["p"] is not None:
        out["model"]["p"] = point["p"]
    if point["beta_tilde"] is not None:
        out["model"]["beta_tilde"] = point["beta_tilde"]
    if point["c"] is not None:
        out["initial"]["c"] = point["c"]
    if point["amplitude"] is not None:
        modes = out["initial"].get("modes")
        if not modes:
            raise ConfigError("[sweep] amplitude needs at least one [initial] mode")
        modes[0]["amplitude"] = point["amplitude"]
    out.pop("sweep", None)
    return out


def _sweep_worker(args: tuple) -> dict:
    cfg, point, run_dir = args
    row = {key: point[key] for key in _SWEEP_KEYS}
    row.update(t_star="", K_fit="", events="")
    try:
        raw = json.dumps(cfg, sort_keys=True).encode()
        code = _execute_run(cfg, raw, Path(run_dir))
        summary = runio.read_summary(Path(run_dir) / "summary.json")
        events = summary["events"]
        row["events"] = "+".join(ev["kind"] for ev in events)
        for ev in events:
            if ev["kind"] == "extinction":
                row["t_star"] = "%.17g" % ev["time"]
        series = runio.read_series(Path(run_dir) / "series.csv")
        model = summary["model"]
        if model["beta_tilde"] is not None and code == EXIT_OK:
            try:
                report = fit_spiral(
                    TimeSeries(series["t"], series["a1"]),
                    summary["initial"]["c"],
                    ConstitutiveLaw(model["p"]),
                    model["beta_tilde"],
                    "defk",
                    spiral_window(float(series["t"][-1])),
                )
                row["K_fit"] = "%.17g" % report.params["K_fit"]
            except TcfilmError:
                pass
    except TcfilmError as exc:
        row["events"] = f"error:{type(exc).__name__}"
    return row


def cmd_sweep(config_path: str, out_dir: str) -> int:
    try:
        cfg, _ = _load_toml(config_path)
        points = _sweep_grid(cfg)
        jobs = []
        for i, point in enumerate(points):
            run_dir = Path(out_dir) / f"run_{i:04d}"
            jobs.append((_apply_point(cfg, point), point, str(run_dir)))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    threads = os.environ.get("TCFILM_THREADS")
    workers = int(threads) if threads else (os.cpu_count() or 1)
    workers = max(1, min(workers, len(jobs)))
    if workers == 1:
        rows = [_sweep_worker(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_worker, jobs))

    Path(out_dir).mkdir(parents=True, exist_ok=True)
    summary_path = Path(out_dir) / "sweep_summary.csv"
    with open(summary_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["run", *_SWEEP_KEYS, "t_star", "K_fit", "events"])
        for i, row in enumerate(rows):
            w.writerow(
                [f"run_{i:04d}"]
                + ["" if row[k] is None else "%.17g" % row[k] for k in _SWEEP_KEYS]
                + [row["t_star"], row["K_fit"], row["events"]]
            )
    return EXIT_OK


def cmd_fit(kind: str, run_dir: str, convention: str = "defk") -> int:
    try:
        run = Path(run_dir)
        series = runio.read_series(run / "series.csv")
        summary = runio.read_summary(run / "summary.json")
        model = summary["model"]
        law = ConstitutiveLaw(model["p"], model["kind"])
        if kind == "extinction":
            tol = summary["solver"]["tol_extinction"]
            energy = TimeSeries(series["t"], series["energy"])
            report = fit_extinction(energy, law.alpha, extinction_window(energy, tol))
        elif kind == "spiral":
            if model["beta_tilde"] is None:
                raise ConfigError("spiral fit needs a case-1 run (no beta_tilde stored)")
            report = fit_spiral(
                TimeSeries(series["t"], series["a1"]),
                summary["initial"]["c"],
                law,
                model["beta_tilde"],
                convention,
                spiral_window(float(series["t"][-1])),
            )
        elif kind == "manifold":
            if model["beta_tilde"] is None:
                raise ConfigError("manifold fit needs a case-1 run (no beta_tilde stored)")
            report = manifold_ratio(
                TimeSeries(series["t"], series["a1"]),
                TimeSeries(series["t"], series["a2"]),
                summary["initial"]["c"],
                law,
                model["beta_tilde"],
                spiral_window(float(series["t"][-1])),
            )
        else:
            raise ConfigError(f"unknown fit kind {kind!r}")
        runio.write_fit_report(run / f"fit_{kind}.json", report)
        return EXIT_OK
    except InsufficientDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except (TcfilmError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def cmd_regime(config_path: str) -> int:
    try:
        cfg, _ = _load_toml(config_path)
        table = _require(cfg, "physical", "config")
        fields = {
            "r_minus",
            "r_plus",
            "d",
            "omega",
            "mu0",
            "mu_plus",
            "rho_minus",
            "rho_plus",
            "gamma_tilde",
            "tau_char",
            "p",
        }
        unknown = set(table) - fields
        if unknown:
            raise ConfigError(f"[physical] has unknown keys {sorted(unknown)}")
        missing = fields - set(table)
        if missing:
            raise ConfigError(f"[physical] is missing keys {sorted(missing)}")
        phys = PhysicalSetup(**{k: float(v) for k, v in table.items()})
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    rep = nondimensionalize(phys)
    payload = {
        "eps_film": rep.eps_film,
        "eta": rep.eta,
        "rho": rep.rho,
        "Re": rep.re,
        "tau": rep.tau,
        "mu": rep.mu,
        "gamma": rep.gamma,
        "D": rep.d_geom,
        "A": rep.a_group,
        "B": rep.b_group,
        "beta": rep.beta,
        "beta_tilde": rep.beta_tilde,
        "regime": rep.regime,
        "p": rep.p,
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_UNSUPPORTED if rep.regime == "case3_unsupported" else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="tcfilm", description="thin-film interface equation laboratory"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="integrate one configuration")
    p_run.add_argument("-c", "--config", required=True)
    p_run.add_argument("-o", "--out", required=True)

    p_sweep = sub.add_parser("sweep", help="grid of runs")
    p_sweep.add_argument("-c", "--config", required=True)
    p_sweep.add_argument("-o", "--out", required=True)

    p_fit = sub.add_parser("fit", help="fit a run directory")
    p_fit.add_argument("--kind", required=True, choices=["extinction", "spiral", "manifold"])
    p_fit.add_argument("--convention", default="defk", choices=["defk", "defk2"])
    p_fit.add_argument("run_dir")

    p_regime = sub.add_parser("regime", help="dimensionless groups and regime")
    p_regime.add_argument("-c", "--config", required=True)

    args = parser.parse_args(argv)
    if args.command == "run":
        return cmd_run(args.config, args.out)
    if args.command == "sweep":
        return cmd_sweep(args.config, args.out)
    if args.command == "fit":
        return cmd_fit(args.kind, args.run_dir, args.convention)
    return cmd_regime(args.config)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
