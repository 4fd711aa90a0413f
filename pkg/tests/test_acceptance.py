"""Acceptance gate: criteria A1-A8, one pass/fail summary line each.

Each test computes every clause of its criterion first, records one line
for the end-of-run summary (with the measured numbers), and only then
asserts, so a failing criterion still reports what was measured.
"""

import time
import warnings

import numpy as np
import pytest

from support import make_field, record_acceptance
from oracles import g_kernel_quad, psi_ref
from tcfilm.asymptotics import (
    TimeSeries,
    extinction_window,
    fit_extinction,
    fit_spiral,
    manifold_ratio,
    spiral_window,
)
from tcfilm.geometry import center_trajectory
from tcfilm.models import ModelSpec
from tcfilm.oracle_fd import fd_stable_dt, run_fd
from tcfilm.rheology import ConstitutiveLaw, flux_kernel
from tcfilm.scaling import PhysicalSetup, nondimensionalize
from tcfilm.spectral_core import analyze
from tcfilm.stepping import SolverConfig, advance

DT_LEVELS = (1e-3, 5e-4, 2.5e-4)


@pytest.fixture(scope="module")
def conservation_runs():
    """powerlaw_beta0, p in {1/2, 2}, n=128, h0 = 1 + 0.05 cos 2theta, T=1.

    The default-dt runs serve A1; all three dt levels serve A2.
    """
    t0 = time.perf_counter()
    runs = {}
    for p in (0.5, 2.0):
        spec = ModelSpec.beta0(p)
        for dt in DT_LEVELS:
            runs[p, dt] = advance(
                spec,
                make_field(128, c=1.0, modes={2: 0.05}),
                SolverConfig(dt0=dt, t_end=1.0, output_stride=1000),
            )
    return runs, time.perf_counter() - t0


@pytest.fixture(scope="module")
def spiral_runs():
    """general_case1, p=1, beta_tilde=2, c=1, T=5000, n in {64, 128}."""
    t0 = time.perf_counter()
    spec = ModelSpec.case1(1.0, 2.0)
    runs = {
        n: advance(
            spec,
            make_field(n, c=1.0, modes={1: 0.05, 2: 0.01}),
            SolverConfig(dt0=0.05, t_end=5000.0, output_stride=100),
        )
        for n in (64, 128)
    }
    return runs, time.perf_counter() - t0


def test_a1_mass_conservation(conservation_runs):
    runs, elapsed = conservation_runs
    drifts = {}
    for p in (0.5, 2.0):
        m = np.asarray(runs[p, 1e-3].diagnostics.mass)
        drifts[p] = float(np.max(np.abs(m - m[0])) / abs(m[0]))
    ok = all(d <= 1e-10 for d in drifts.values())
    record_acceptance(
        "A1 mass conservation",
        ok,
        f"rel drift p=1/2: {drifts[0.5]:.2e}, p=2: {drifts[2.0]:.2e} "
        f"(tol 1e-10); runs {elapsed:.0f}s",
    )
    assert drifts[0.5] <= 1e-10
    assert drifts[2.0] <= 1e-10


def test_a2_energy_identity(conservation_runs):
    runs, elapsed = conservation_runs
    residuals = {}
    bounds = {}
    ratios = {}
    for p in (0.5, 2.0):
        residuals[p] = [runs[p, dt].diagnostics.balance_residual() for dt in DT_LEVELS]
        e0 = runs[p, 1e-3].diagnostics.energy[0]
        bounds[p] = 1e-6 * (1.0 + abs(e0))
        r = residuals[p]
        ratios[p] = [r[0] / r[1], r[1] / r[2]]
    ok_bound = {p: residuals[p][0] <= bounds[p] for p in residuals}
    ok_trend = {p: min(ratios[p]) >= 3.0 for p in ratios}
    ok = all(ok_bound.values()) and all(ok_trend.values())
    detail = "; ".join(
        f"p={p:g}: residual {residuals[p][0]:.2e} (bound {bounds[p]:.2e}), "
        f"halving ratios {ratios[p][0]:.2f}, {ratios[p][1]:.2f} (need >= 3)"
        for p in (0.5, 2.0)
    )
    record_acceptance("A2 energy identity", ok, f"{detail}; runs {elapsed:.0f}s")
    for p in (0.5, 2.0):
        assert residuals[p][0] <= bounds[p], (
            f"p={p}: max |E + D_cum - E0| = {residuals[p][0]:.3e} "
            f"exceeds {bounds[p]:.3e}"
        )
        assert min(ratios[p]) >= 3.0, (
            f"p={p}: residual halving ratios {ratios[p]} below 3x"
        )


def test_a3_newtonian_decay_rate():
    t0 = time.perf_counter()
    traj = advance(
        ModelSpec.newtonian(0.0, 1.0),
        make_field(64, c=1.0, modes={2: 1e-4}),
        SolverConfig(dt0=1e-3, t_end=0.5, tol_extinction=1e-30),
    )
    d = traj.diagnostics
    log_e = np.log(np.asarray(d.energy))
    t = np.asarray(d.t)
    slope, intercept = np.polyfit(t, log_e, 1)
    fit = slope * t + intercept
    r2 = 1.0 - np.sum((log_e - fit) ** 2) / np.sum((log_e - log_e.mean()) ** 2)
    rate = -slope
    kinds = [ev.kind for ev in traj.events]
    ok = abs(rate - 24.0) / 24.0 <= 0.02 and "extinction" not in kinds and r2 >= 0.999
    record_acceptance(
        "A3 newtonian decay rate",
        ok,
        f"fitted rate {rate:.6f} vs 24 (tol 2%), log E linearity r2={r2:.6f}, "
        f"events {kinds}; {time.perf_counter() - t0:.0f}s",
    )
    assert abs(rate - 24.0) / 24.0 <= 0.02
    assert r2 >= 0.999
    assert "extinction" not in kinds


def test_a4_finite_time_circle_convergence():
    t0 = time.perf_counter()
    cfg = SolverConfig(dt0=2.5e-5, t_end=0.1, output_stride=400)
    traj = advance(
        ModelSpec.beta0(2.0),
        make_field(128, c=1.0, modes={2: 0.01}),
        cfg,
    )
    d = traj.diagnostics
    events = {ev.kind: ev.time for ev in traj.events}
    has_event = "extinction" in events and events.get("extinction", np.inf) < cfg.t_end
    t_star = events.get("extinction", np.inf)

    energy = TimeSeries(d.t, d.energy)
    report = fit_extinction(energy, 0.5, extinction_window(energy, cfg.tol_extinction))
    r2 = report.r_squared

    # circle continuation: past t* only the circle modes survive
    high = 0.0
    for t_snap, snap in zip(traj.snapshot_times, traj.snapshots):
        if t_snap > t_star:
            high = max(high, float(np.max(np.abs(analyze(snap.values)[2:]))))
    t_arr = np.asarray(d.t)
    post = t_arr > t_star
    mass_arr = np.asarray(d.mass)[post]
    a1_arr = np.asarray(d.a1)[post]
    mass_drift = float(np.max(np.abs(mass_arr - mass_arr[0])))
    a1_drift = float(np.max(np.abs(a1_arr - a1_arr[0])))

    ok = (
        has_event
        and r2 >= 0.99
        and high <= 1e-6
        and mass_drift <= 1e-8
        and a1_drift <= 1e-8
    )
    record_acceptance(
        "A4 finite-time circle convergence",
        ok,
        f"t*={t_star:.4f} (< {cfg.t_end}), E^(1/4) fit r2={r2:.6f} (>= 0.99), "
        f"post-t* max|a_n>=2|={high:.1e} (<= 1e-6), mass drift {mass_drift:.1e}, "
        f"a1 drift {a1_drift:.1e} (<= 1e-8); {time.perf_counter() - t0:.0f}s",
    )
    assert has_event
    assert r2 >= 0.99
    assert high <= 1e-6
    assert mass_drift <= 1e-8
    assert a1_drift <= 1e-8


def test_a5_spiral_asymptotics(spiral_runs):
    runs, elapsed = spiral_runs
    law = ConstitutiveLaw(1.0)
    window = spiral_window(5000.0)

    d64 = runs[64].diagnostics
    spiral = fit_spiral(TimeSeries(d64.t, d64.a1), 1.0, law, 2.0, "defk", window)
    k_fit = spiral.params["K_fit"]
    ktilde_fit = spiral.params["Ktilde_fit"]
    drift = spiral.params["K_drift"]
    k_pred = spiral.predicted["K"]
    ktilde_pred = spiral.predicted["Ktilde"]

    fits = center_trajectory(runs[64], 0.1)
    modulus = np.array([f.center_modulus for f in fits.values])
    mask = (fits.t >= window[0]) & (modulus > 0.0)
    slope = float(np.polyfit(np.log(fits.t[mask]), np.log(modulus[mask]), 1)[0])

    ratio = {}
    selected = {}
    for n in (64, 128):
        d = runs[n].diagnostics
        rep = manifold_ratio(
            TimeSeries(d.t, d.a1), TimeSeries(d.t, d.a2), 1.0, law, 2.0, window
        )
        ratio[n] = rep.params["ratio"]
        selected[n] = rep.selected
    ratio_gap = abs(ratio[64] - ratio[128]) / ratio[64]

    ok_a = (
        abs(k_fit - k_pred) / k_pred <= 0.15
        and abs(ktilde_fit - ktilde_pred) / abs(ktilde_pred) <= 0.15
    )
    ok_b = drift <= 0.10
    ok_c = abs(slope - (-0.5)) <= 0.05
    ok_d = ratio_gap <= 0.10 and selected[64] == selected[128]
    record_acceptance(
        "A5 spiral asymptotics",
        ok_a and ok_b and ok_c and ok_d,
        f"(a) K_fit={k_fit:.4f} vs {k_pred} / Ktilde={ktilde_fit:.4f} vs "
        f"{ktilde_pred} (tol 15%); (b) |a1|sqrt(t) drift {drift:.1%} (<= 10%); "
        f"(c) center slope {slope:.3f} vs -0.5+-0.05; (d) ratio n64={ratio[64]:.4f} "
        f"n128={ratio[128]:.4f} gap {ratio_gap:.1%} -> {selected[64]} "
        f"(candidates defq 0.25 / defq2 0.5); runs {elapsed:.0f}s",
    )
    assert ok_d, f"manifold ratio unstable across grids: {ratio}"
    assert ok_a, (
        f"K_fit={k_fit:.4f} (target {k_pred} +-15%), "
        f"Ktilde_fit={ktilde_fit:.4f} (target {ktilde_pred} +-15%)"
    )
    assert ok_b, f"|a1|sqrt(t) drift {drift:.1%} exceeds 10%"
    assert ok_c, f"center modulus log-log slope {slope:.3f} outside -0.5 +- 0.05"


def test_a6_finite_difference_oracle():
    t0 = time.perf_counter()
    sups = {}
    for name, spec in (
        ("newtonian", ModelSpec.newtonian(0.0, 1.0)),
        ("p=2 beta=0", ModelSpec.beta0(2.0)),
    ):
        traj = advance(
            spec,
            make_field(64, c=1.0, modes={1: 0.025, 2: 0.01}),
            SolverConfig(dt0=1e-5, t_end=0.01, output_stride=1000),
        )
        h_spec = traj.snapshots[-1].values
        h0_fd = make_field(512, c=1.0, modes={1: 0.025, 2: 0.01}).values
        h_fd = run_fd(spec, h0_fd, 0.01, fd_stable_dt(spec, h0_fd))
        # the coarse grid is every 8th node of the fine one
        sups[name] = float(np.max(np.abs(h_spec - h_fd[::8])))
    ok = all(v <= 1e-4 for v in sups.values())
    detail = ", ".join(f"{k}: sup|diff|={v:.2e}" for k, v in sups.items())
    record_acceptance(
        "A6 finite-difference oracle",
        ok,
        f"{detail} (tol 1e-4); {time.perf_counter() - t0:.0f}s",
    )
    for name, v in sups.items():
        assert v <= 1e-4, f"{name}: spectral vs FD sup difference {v:.3e}"


def test_a7_flux_kernel_quadrature():
    t0 = time.perf_counter()
    p_grid = (0.5, 2.0 / 3.0, 1.0, 1.5, 2.0, 3.0)
    beta_grid = (-2.0, -0.5, 0.0, 0.5, 1.0, 2.0)
    q_grid = (-3.0, -1.0, -1e-8, 0.0, 1e-8, 1.0, 3.0)
    worst = 0.0
    for p in p_grid:
        law = ConstitutiveLaw(p)
        for beta in beta_grid:
            for q in q_grid:
                got = flux_kernel(law, beta, q)
                ref = g_kernel_quad(p, beta, q)
                # 1e-6 floor: quadrature cannot certify relative error
                # below it where G crosses zero
                worst = max(worst, abs(got - ref) / max(abs(ref), 1e-6))
    # the limiting branch lives on |q| << |beta|; at beta = 0 the kernel
    # approaches 0 only like |q|^alpha, and at q = +-1e-8 the genuine
    # first-order term q psi'(beta)/3 already exceeds 1e-9 (those grid
    # points are certified by the quadrature comparison above instead)
    worst_small = 0.0
    for p in p_grid:
        law = ConstitutiveLaw(p)
        for beta in beta_grid:
            if beta == 0.0:
                continue
            target = 0.5 * psi_ref(p, beta)
            for q in (-1e-12, 0.0, 1e-12):
                worst_small = max(worst_small, abs(flux_kernel(law, beta, q) - target))
    ok = worst <= 1e-10 and worst_small <= 1e-9
    record_acceptance(
        "A7 flux kernel vs quadrature",
        ok,
        f"grid max rel err {worst:.2e} (tol 1e-10), small-q branch vs psi(beta)/2 "
        f"max err {worst_small:.2e} (tol 1e-9); {time.perf_counter() - t0:.0f}s",
    )
    assert worst <= 1e-10
    assert worst_small <= 1e-9


def test_a8_scaling_identities():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst_b = 0.0
    worst_beta = 0.0
    exact_tilde = True
    for _ in range(100):
        r_minus = float(rng.uniform(0.01, 0.5))
        phys = PhysicalSetup(
            r_minus=r_minus,
            r_plus=r_minus * float(rng.uniform(1.1, 4.0)),
            d=r_minus * float(rng.uniform(0.01, 0.5)),
            omega=float(10.0 ** rng.uniform(-2, 2)),
            mu0=float(10.0 ** rng.uniform(-3, 2)),
            mu_plus=float(10.0 ** rng.uniform(-3, 2)),
            rho_minus=float(rng.uniform(500, 2000)),
            rho_plus=float(rng.uniform(500, 2000)),
            gamma_tilde=float(10.0 ** rng.uniform(-3, 0)),
            tau_char=float(10.0 ** rng.uniform(-2, 2)),
            p=float(rng.uniform(0.3, 3.0)),
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rep = nondimensionalize(phys)
        eps = phys.d / phys.r_minus
        b_phys = phys.gamma_tilde * eps**2 * phys.tau_char / (phys.mu0 * phys.r_minus)
        beta_phys = (
            rep.d_geom * phys.r_minus * phys.omega * phys.mu_plus
            / (eps**2 * phys.gamma_tilde)
        )
        worst_b = max(worst_b, abs(rep.b_group - b_phys) / abs(b_phys))
        worst_beta = max(worst_beta, abs(rep.beta - beta_phys) / abs(beta_phys))
        exact_tilde = exact_tilde and rep.beta_tilde == rep.b_group * rep.beta

    worked = nondimensionalize(
        PhysicalSetup(
            r_minus=0.05,
            r_plus=0.1,
            d=0.005,
            omega=1.0,
            mu0=1.0,
            mu_plus=1.0,
            rho_minus=1000.0,
            rho_plus=1000.0,
            gamma_tilde=0.07,
            tau_char=1.0,
            p=1.0,
        )
    )
    ok_worked = (
        abs(worked.b_group - 0.014) / 0.014 <= 1e-12
        and abs(worked.beta - 190.476) / 190.476 <= 1e-4
    )
    ok = worst_b <= 1e-12 and worst_beta <= 1e-12 and exact_tilde and ok_worked
    record_acceptance(
        "A8 scaling identities",
        ok,
        f"100 seeds: max rel gap B {worst_b:.1e}, beta {worst_beta:.1e} (tol 1e-12), "
        f"beta_tilde = B*beta exact: {exact_tilde}; worked example "
        f"B={worked.b_group:.6f}, beta={worked.beta:.3f}; "
        f"{time.perf_counter() - t0:.1f}s",
    )
    assert worst_b <= 1e-12
    assert worst_beta <= 1e-12
    assert exact_tilde
    assert ok_worked
