"""Time integration with event detection.

The default scheme is ETDRK2: the stiff linear part A0 (d^2 + d^4), with
symbol A0 (k^2 - k^4), is integrated exactly by mode-wise exponentials;
the nonlinear remainder gets second-order phi-function weights.  That
operator is neutral exactly on modes {0, +-1} and damping otherwise, so
the slowly rotating large-time dynamics can be followed with steps far
above the explicit fourth-order stability limit.  A classical RK4 path
serves as the fully explicit reference scheme.

For the case-1 variants the full linearization about the current mean
(transport phase included) is integrated exactly.  The degenerate
variants have no state-independent linear part; an effective A0 is
refreshed from the current field each step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import spectral_core as sc
from .diagnostics import DiagnosticsSeries, dissipation_rate, energy, mass
from .errors import BlowupError, ConfigError
from .models import ModelSpec, _grid_parts, _rhs_coeffs
from .rheology import mobility, psi, psi_prime
from .spectral_core import PeriodicField

__all__ = [
    "SolverConfig",
    "Event",
    "Trajectory",
    "step_etdrk2",
    "step_rk4",
    "stability_dt",
    "advance",
]

_EPS_CLAMP = 1e-8  # slope-clamp scale for the degenerate mobility estimates
_EXTINCTION_STREAK = 10


@dataclass(frozen=True)
class SolverConfig:
    """How a run is integrated and sampled."""

    scheme: str = "etdrk2"
    dt0: float = 1e-3
    cfl: float = 0.5
    t_end: float = 1.0
    tol_extinction: float = 1e-12
    h_min: float = 1e-6
    output_stride: int = 100

    def __post_init__(self):
        if self.scheme not in ("etdrk2", "rk4"):
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        if not (self.dt0 > 0 and np.isfinite(self.dt0)):
            raise ConfigError("dt0 must be a positive real")
        if not (self.cfl > 0 and np.isfinite(self.cfl)):
            raise ConfigError("cfl must be a positive real")
        if not (self.t_end > 0 and np.isfinite(self.t_end)):
            raise ConfigError("t_end must be a positive real")
        if self.tol_extinction < 0:
            raise ConfigError("tol_extinction must be nonnegative")
        if not (self.h_min > 0):
            raise ConfigError("h_min must be positive")
        if self.output_stride < 1 or self.output_stride != int(self.output_stride):
            raise ConfigError("output_stride must be a positive integer")


@dataclass(frozen=True)
class Event:
    kind: str  # extinction | touchdown | t_end
    time: float


@dataclass
class Trajectory:
    times: np.ndarray
    snapshots: list[PeriodicField]
    snapshot_times: np.ndarray
    diagnostics: DiagnosticsSeries
    events: list[Event] = field(default_factory=list)
    status: str = "completed"  # completed | touchdown

    def event(self, kind: str) -> Event | None:
        for ev in self.events:
            if ev.kind == kind:
                return ev
        return None


# -- phi functions -----------------------------------------------------------


def _phi12(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """phi1 = (e^z - 1)/z and phi2 = (e^z - z - 1)/z^2, Taylor near z = 0."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-4
    zs = np.where(small, 1.0, z)
    ez = np.exp(zs)
    p1 = (ez - 1.0) / zs
    p2 = (ez - zs - 1.0) / (zs * zs)
    # 4-term Taylor: error ~ |z|^4/120 < 1e-18 at the switch point
    t1 = 1.0 + z * (1.0 / 2.0 + z * (1.0 / 6.0 + z / 24.0))
    t2 = 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0))
    return np.where(small, t1, p1), np.where(small, t2, p2)


def _degenerate_a0(spec: ModelSpec, coeffs: np.ndarray, n: int) -> float:
    """Effective damping coefficient for the variants with no fixed linear part.

    With m(h) the mobility prefactor and slope psi'(Q), the local
    fourth-order coefficient is m(h) psi'(Q).  For alpha < 1 the slope
    blows up at zeros of Q, so the root-mean-square of Q (clamped) sets a
    representative scale; for alpha >= 1 the grid maximum of the clamped
    slope is finite and used directly.
    """
    h, q, _ = _grid_parts(spec, coeffs, n)
    alpha = spec.law.alpha
    if spec.variant == "mollified":
        mh = float(np.max(mobility(spec.cutoff, h)))
        eps = max(spec.eps_mol, _EPS_CLAMP)
    else:
        mh = float(np.max(h ** (alpha + 2.0)))
        eps = _EPS_CLAMP
    if alpha < 1.0:
        slope = alpha * (float(np.mean(q * q)) + eps * eps) ** ((alpha - 1.0) / 2.0)
        return mh * slope
    slope = alpha * np.max((q * q + eps * eps) ** ((alpha - 1.0) / 2.0))
    return mh * float(slope)


def _linear_coeffs(spec: ModelSpec, coeffs: np.ndarray, n: int, c_ref: float) -> np.ndarray:
    """Mode-wise linear symbol lambda_k on the half spectrum."""
    k = sc.half_modes(n)
    lap = k * k - k**4
    # np.float64 cube: extreme states overflow to inf (caught as blowup)
    # instead of raising a bare OverflowError mid-step
    c3 = np.float64(c_ref) ** 3
    if spec.variant in ("general_case1", "powerlaw_case1"):
        a0 = c3 * psi_prime(spec.law, spec.beta_tilde) / 3.0
        lam = -1j * k * c_ref * psi(spec.law, spec.beta_tilde) + a0 * lap
    elif spec.variant == "newtonian_pv1":
        lam = (spec.c_surf * c3 * lap).astype(complex)
    else:
        lam = (_degenerate_a0(spec, coeffs, n) * lap).astype(complex)
    lam[0] = 0.0
    return lam


def _step_etdrk2_coeffs(
    spec: ModelSpec, u: np.ndarray, n: int, dt: float, c_ref: float
) -> np.ndarray:
    lam = _linear_coeffs(spec, u, n, c_ref)
    elam = np.exp(lam * dt)
    p1, p2 = _phi12(lam * dt)
    n0 = _rhs_coeffs(spec, u, n) - lam * u
    a = elam * u + dt * p1 * n0
    n1 = _rhs_coeffs(spec, a, n) - lam * a
    out = a + dt * p2 * (n1 - n0)
    out[0] = u[0]
    return out


def _step_rk4_coeffs(spec: ModelSpec, u: np.ndarray, n: int, dt: float) -> np.ndarray:
    k1 = _rhs_coeffs(spec, u, n)
    k2 = _rhs_coeffs(spec, u + 0.5 * dt * k1, n)
    k3 = _rhs_coeffs(spec, u + 0.5 * dt * k2, n)
    k4 = _rhs_coeffs(spec, u + dt * k3, n)
    out = u + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
    out[0] = u[0]
    return out


def step_etdrk2(spec: ModelSpec, h: PeriodicField, dt: float, c_ref: float) -> PeriodicField:
    """One exponential-integrator step of size dt about the mean c_ref."""
    if dt <= 0:
        raise ConfigError("dt must be positive")
    u = _step_etdrk2_coeffs(spec, sc.analyze(h.values), h.n, dt, c_ref)
    vals = sc.synthesize(u, h.n)
    if not np.all(np.isfinite(vals)):
        raise BlowupError(f"non-finite state after etdrk2 step (dt = {dt:g})")
    return PeriodicField(vals)


def step_rk4(spec: ModelSpec, h: PeriodicField, dt: float) -> PeriodicField:
    """One classical fourth-order step on the full right-hand side."""
    if dt <= 0:
        raise ConfigError("dt must be positive")
    u = _step_rk4_coeffs(spec, sc.analyze(h.values), h.n, dt)
    vals = sc.synthesize(u, h.n)
    if not np.all(np.isfinite(vals)):
        raise BlowupError(f"non-finite state after rk4 step (dt = {dt:g})")
    return PeriodicField(vals)


def stability_dt(spec: ModelSpec, h: PeriodicField, cfl: float = 0.5) -> float:
    """Explicit stability estimate cfl * 2 / (M k_max^4), k_max = n/3.

    M is the grid maximum of the effective fourth-order mobility
    coefficient of the variant, clamped to a floor of 1e-12; degenerate
    slopes |Q|^(alpha-1) are capped through the smoothed form
    (Q^2 + eps^2)^((alpha-1)/2).
    """
    u = sc.analyze(h.values)
    hd, q, _ = _grid_parts(spec, u, h.n)
    alpha = spec.law.alpha
    v = spec.variant
    if v == "newtonian_pv1":
        m = spec.c_surf * np.max(hd) ** 3
    elif v == "powerlaw_beta0":
        m = np.max(hd ** (alpha + 2.0) * alpha * (q * q + _EPS_CLAMP**2) ** ((alpha - 1.0) / 2.0))
    elif v == "mollified":
        eps = max(spec.eps_mol, _EPS_CLAMP)
        s2 = q * q + eps * eps
        slope = s2 ** ((alpha - 3.0) / 2.0) * (alpha * q * q + eps * eps)
        m = np.max(mobility(spec.cutoff, hd) * slope)
    else:
        # case-1: coefficient h^3 G_q(beta, hQ) with G_q = int z^2 psi'(beta + z hQ) dz
        beta = spec.beta_tilde
        s1 = beta + hd * q
        if alpha >= 1.0:
            s_star = np.maximum(np.abs(beta), np.abs(s1))
        else:
            same_sign = beta * s1 > 0.0
            s_star = np.where(same_sign, np.minimum(np.abs(beta), np.abs(s1)), 0.0)
        slope = alpha * (s_star * s_star + _EPS_CLAMP**2) ** ((alpha - 1.0) / 2.0)
        m = np.max(hd**3 * slope) / 3.0
    m = max(float(m), 1e-12)
    k_max = h.n / 3.0
    return cfl * 2.0 / (m * k_max**4)


def advance(spec: ModelSpec, h0: PeriodicField, cfg: SolverConfig) -> Trajectory:
    """Integrate from h0 to t_end, sampling diagnostics at every step.

    Extinction (energy of the deviation at or below tol_extinction for 10
    consecutive accepted steps) is recorded at the first step of the
    streak and integration continues.  The detector is a transition
    detector: it arms only once the energy has been observed above the
    tolerance, so a run started at a circle state reports no extinction.
    Touchdown (min h below h_min) stops the run with the partial
    trajectory preserved under status "touchdown".  A non-finite state
    raises BlowupError.
    """
    n = h0.n
    u = sc.analyze(h0.values) * sc.dealias_mask(n)
    if cfg.scheme == "rk4":
        bound = stability_dt(spec, PeriodicField(sc.synthesize(u, n)), cfg.cfl)
        if cfg.dt0 > bound:
            raise ConfigError(
                f"dt0 = {cfg.dt0:g} exceeds the explicit stability bound {bound:g}"
            )

    diag = DiagnosticsSeries()
    snapshots: list[PeriodicField] = []
    snapshot_times: list[float] = []
    events: list[Event] = []
    status = "completed"

    def sample(t: float, field_: PeriodicField, rate: float, prev) -> tuple:
        m = mass(field_)
        dev = PeriodicField(field_.values - np.mean(field_.values))
        e = energy(dev)
        a = sc.analyze(field_.values)
        if prev is None:
            d = 0.0
        else:
            t_prev, rate_prev, d_prev = prev
            d = d_prev + 0.5 * (t - t_prev) * (rate + rate_prev)
        diag.append(
            t, m, e, d, float(np.min(field_.values)), complex(a[0]), complex(a[1]), complex(a[2])
        )
        return (t, rate, d), e

    fld = PeriodicField(sc.synthesize(u, n))
    rate0 = dissipation_rate(spec, fld)
    prev, e_now = sample(0.0, fld, rate0, None)
    snapshots.append(fld)
    snapshot_times.append(0.0)

    streak = 0
    t_streak_start = 0.0
    extinct_recorded = False
    armed = e_now > cfg.tol_extinction
    t = 0.0
    i = 0
    while t < cfg.t_end - 1e-15 * cfg.t_end:
        if cfg.scheme == "etdrk2":
            dt = min(cfg.dt0, cfg.t_end - t)
            c_ref = float(u[0].real)
            u = _step_etdrk2_coeffs(spec, u, n, dt, c_ref)
        else:
            fld = PeriodicField(sc.synthesize(u, n))
            dt = min(cfg.dt0, stability_dt(spec, fld, cfg.cfl), cfg.t_end - t)
            u = _step_rk4_coeffs(spec, u, n, dt)
        t = t + dt
        i += 1
        vals = sc.synthesize(u, n)
        if not np.all(np.isfinite(vals)):
            raise BlowupError(f"non-finite state at t = {t:g}")
        fld = PeriodicField(vals)
        rate = dissipation_rate(spec, fld)
        prev, e_now = sample(t, fld, rate, prev)

        if i % cfg.output_stride == 0:
            snapshots.append(fld)
            snapshot_times.append(t)

        if float(np.min(vals)) < cfg.h_min:
            events.append(Event("touchdown", t))
            status = "touchdown"
            break

        if not extinct_recorded:
            if e_now <= cfg.tol_extinction:
                if armed:
                    if streak == 0:
                        t_streak_start = t
                    streak += 1
                    if streak >= _EXTINCTION_STREAK:
                        events.append(Event("extinction", t_streak_start))
                        extinct_recorded = True
            else:
                armed = True
                streak = 0

    if status == "completed":
        events.append(Event("t_end", t))
        if snapshot_times[-1] != t:
            snapshots.append(fld)
            snapshot_times.append(t)

    return Trajectory(
        times=np.asarray(diag.t),
        snapshots=snapshots,
        snapshot_times=np.asarray(snapshot_times),
        diagnostics=diag,
        events=events,
        status=status,
    )
