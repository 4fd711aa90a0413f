"""Fits for the two long-time behaviours and the quadratic-manifold ratio.

Shear-thickening films extinguish in finite time: y(t) = E(t)^((1-alpha)/2)
decays along a straight line of slope -C_alpha, hitting zero at t*.  In
the non-degenerate case-1 regime the deviation instead spirals in
algebraically,

    h(theta, t) ~ c + (2 K / sqrt(t)) cos(theta - c psi(beta) t
                                           + Ktilde log t + C0),

so |a1| sqrt(t) is asymptotically the constant K and the rotating-frame
phase of a1 is affine in log t.  Two printed conventions for (K, Ktilde)
and two for the quadratic coefficient a2/a1^2 circulate; the fitters
report the measured value next to both candidates so the data can
arbitrate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import spectral_core as sc
from .diagnostics import DiagnosticsSeries
from .errors import CoarseSamplingError, DomainError, InsufficientDataError
from .rheology import ConstitutiveLaw, psi, psi_prime
from .spectral_core import PeriodicField
from .stepping import Trajectory

__all__ = [
    "TimeSeries",
    "FitReport",
    "fit_extinction",
    "fit_spiral",
    "manifold_ratio",
    "rotating_frame",
    "extinction_window",
    "spiral_window",
]

_MIN_SAMPLES = 10


@dataclass(frozen=True)
class TimeSeries:
    """Sampled scalar (possibly complex) history."""

    t: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        v = np.asarray(self.values)
        if t.shape != v.shape or t.ndim != 1:
            raise DomainError("time and value arrays must be 1-d of equal length")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", v)

    def clip(self, window: tuple[float, float]) -> "TimeSeries":
        lo, hi = window
        keep = (self.t >= lo) & (self.t <= hi)
        return TimeSeries(self.t[keep], self.values[keep])


@dataclass(frozen=True)
class FitReport:
    kind: str  # extinction | spiral | manifold_ratio
    params: dict[str, float]
    predicted: dict[str, float]
    window: tuple[float, float]
    r_squared: float
    flags: tuple[str, ...] = ()
    selected: str | None = None


def _linfit(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Least-squares slope, intercept and r^2 of y against x."""
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    return float(slope), float(intercept), r2


def fit_extinction(energy: TimeSeries, alpha: float, window: tuple[float, float]) -> FitReport:
    """Line fit of E^((1-alpha)/2) on the window; slopeC_alpha, crossing t_star.

    A flat series (relative slope below 1e-9 over the window) is flagged
    non_extinguishing with t_star = +inf.
    """
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie in (0,1), got {alpha}")
    ser = energy.clip(window)
    if ser.t.size < _MIN_SAMPLES:
        raise InsufficientDataError(
            f"{ser.t.size} samples in window; need at least {_MIN_SAMPLES}"
        )
    e = np.real(ser.values).astype(float)
    if np.any(e <= 0.0):
        raise DomainError("energy must be strictly positive on the fit window")
    y = e ** ((1.0 - alpha) / 2.0)
    slope, intercept, r2 = _linfit(ser.t, y)
    span = float(ser.t[-1] - ser.t[0])
    flags: tuple[str, ...] = ()
    if slope >= 0.0 or (-slope) * span <= 1e-9 * float(np.max(y)):
        t_star = float("inf")
        flags = ("non_extinguishing",)
        c_alpha = max(-slope, 0.0)
    else:
        c_alpha = -slope
        t_star = intercept / c_alpha
    return FitReport(
        kind="extinction",
        params={"C_alpha": c_alpha, "t_star": t_star, "intercept": intercept},
        predicted={},
        window=window,
        r_squared=r2,
        flags=flags,
    )


def _spiral_predictions(
    convention: str, c: float, law: ConstitutiveLaw, beta_like: float
) -> dict[str, float]:
    if convention == "defk":
        ps = psi(law, beta_like)
        pp = psi_prime(law, beta_like)
        if c == 0.0 or ps == 0.0:
            return {"K": 0.0, "Ktilde": 0.0}
        return {
            "K": float(np.sqrt(2.0 * c**3 * pp / ps)),
            "Ktilde": float(c**2 * pp / (2.0 * ps)),
        }
    if convention == "defk2":
        p = law.p
        if beta_like <= 0.0:
            raise DomainError("defk2 requires beta > 0")
        return {
            "K": float(np.sqrt(c**3 / (p * beta_like ** (1.0 / p + 1.0)))),
            "Ktilde": float((2.0 * p + 1.0) / p**2 * c**2 / beta_like),
        }
    raise DomainError(f"unknown convention {convention!r}")


def _unwrap_checked(phase: np.ndarray) -> np.ndarray:
    """Nearest-branch continuation; a jump above pi is not unwrappable."""
    d = np.diff(phase)
    d = (d + np.pi) % (2.0 * np.pi) - np.pi
    if np.any(np.abs(d) >= np.pi - 1e-12):
        raise CoarseSamplingError(
            "rotating-frame phase jumps by >= pi between samples; refine output_stride"
        )
    return phase[0] + np.concatenate(([0.0], np.cumsum(d)))


def fit_spiral(
    a1: TimeSeries,
    c: float,
    law: ConstitutiveLaw,
    beta_like: float,
    convention: str,
    window: tuple[float, float],
) -> FitReport:
    """Fit K from |a1| sqrt(t) and (Ktilde, C0) from the rotating-frame phase.

    The frame rotates at c psi(beta_like); the de-rotated phase is fitted
    affinely against log t.  params carries K_fit, its relative drift
    across the window (|first - last| / mean), Ktilde_fit and C0; the
    predicted values follow the requested printed convention.
    """
    ser = a1.clip(window)
    if ser.t.size < _MIN_SAMPLES:
        raise InsufficientDataError(
            f"{ser.t.size} samples in window; need at least {_MIN_SAMPLES}"
        )
    amp = np.abs(ser.values)
    if np.any(amp == 0.0):
        raise InsufficientDataError("no mode-1 signal: |a1| vanishes on the window")
    if np.any(ser.t <= 0.0):
        raise DomainError("fit_spiral needs t > 0 on the window")
    k_series = amp * np.sqrt(ser.t)
    k_fit = float(np.mean(k_series))
    drift = float(abs(k_series[0] - k_series[-1]) / k_fit) if k_fit > 0 else 0.0

    speed = c * float(psi(law, beta_like))
    derotated = ser.values * np.exp(1j * speed * ser.t)
    phase = _unwrap_checked(np.angle(derotated))
    slope, intercept, r2 = _linfit(np.log(ser.t), phase)

    return FitReport(
        kind="spiral",
        params={"K_fit": k_fit, "K_drift": drift, "Ktilde_fit": slope, "C0": intercept},
        predicted=_spiral_predictions(convention, c, law, beta_like),
        window=window,
        r_squared=r2,
    )


def manifold_ratio(
    a1: TimeSeries,
    a2: TimeSeries,
    c: float,
    law: ConstitutiveLaw,
    beta_tilde: float,
    window: tuple[float, float],
) -> FitReport:
    """Measured median |a2|/|a1|^2 against the two printed candidates.

    r_A = psi/(8 c^3 psi') and r_B = p beta/(4 c^3) differ by the factor
    the source never reconciled; `selected` names the closer one.
    """
    s1 = a1.clip(window)
    s2 = a2.clip(window)
    if s1.t.size < _MIN_SAMPLES:
        raise InsufficientDataError(
            f"{s1.t.size} samples in window; need at least {_MIN_SAMPLES}"
        )
    if s1.t.size != s2.t.size or not np.array_equal(s1.t, s2.t):
        raise DomainError("a1 and a2 must share sample times")
    m1 = np.abs(s1.values)
    if np.any(m1 == 0.0):
        raise DomainError("|a1| must stay away from zero on the window")
    ratios = np.abs(s2.values) / m1**2
    r = float(np.median(ratios))
    r_a = float(psi(law, beta_tilde) / (8.0 * c**3 * psi_prime(law, beta_tilde)))
    r_b = float(law.p * beta_tilde / (4.0 * c**3))
    selected = "defq" if abs(r - r_a) <= abs(r - r_b) else "defq2"
    return FitReport(
        kind="manifold_ratio",
        params={"ratio": r},
        predicted={"defq": r_a, "defq2": r_b},
        window=window,
        r_squared=1.0,
        selected=selected,
    )


def rotating_frame(traj: Trajectory, speed: float) -> Trajectory:
    """The trajectory in the frame rotating at `speed`.

    Each snapshot at time t is shifted by -speed*t, i.e. mode k picks up
    the phase e^{+ik speed t} (so h = cos(theta - speed*t) becomes
    cos(theta) with a1 = 1/2); the diagnostic mode series are re-derived
    the same way.
    """
    if speed == 0.0:
        return traj
    snaps = []
    for t, f in zip(traj.snapshot_times, traj.snapshots):
        a = sc.analyze(f.values)
        k = sc.half_modes(f.n)
        snaps.append(PeriodicField(sc.synthesize(a * np.exp(1j * k * speed * t), f.n)))
    d = traj.diagnostics
    ts = np.asarray(d.t)
    rot1 = np.exp(1j * speed * ts)
    diag = DiagnosticsSeries(
        t=list(d.t),
        mass=list(d.mass),
        energy=list(d.energy),
        diss_cum=list(d.diss_cum),
        min_h=list(d.min_h),
        a0=list(d.a0),
        a1=list(np.asarray(d.a1) * rot1),
        a2=list(np.asarray(d.a2) * rot1**2),
    )
    return Trajectory(
        times=traj.times.copy(),
        snapshots=snaps,
        snapshot_times=traj.snapshot_times.copy(),
        diagnostics=diag,
        events=list(traj.events),
        status=traj.status,
    )


def extinction_window(energy: TimeSeries, tol_extinction: float) -> tuple[float, float]:
    """Default fit window: the last decade of E above the 100*tol cutoff.

    t_hi is the first time E drops to 100*tol (last sample if it never
    does); t_lo the first time it drops within a factor 10 of that level.
    """
    e = np.real(energy.values).astype(float)
    cut = 100.0 * tol_extinction
    below_hi = np.nonzero(e <= cut)[0]
    i_hi = int(below_hi[0]) if below_hi.size else e.size - 1
    below_lo = np.nonzero(e <= 10.0 * cut)[0]
    i_lo = int(below_lo[0]) if below_lo.size else 0
    if i_lo >= i_hi:
        i_lo = 0
    return float(energy.t[i_lo]), float(energy.t[i_hi])


def spiral_window(t_end: float) -> tuple[float, float]:
    """Default fit window for spiral asymptotics: [t_end/10, t_end]."""
    return t_end / 10.0, t_end
