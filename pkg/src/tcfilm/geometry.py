"""Interface curves r = 1 + eps_film h(theta) and circle fitting.

The long-time interface is a near-circle whose center drifts along a
spiral; tracking that center only needs an algebraic least-squares
circle per snapshot.  For a limacon r = R + delta cos(theta - theta0)
the fitted center sits at distance ~ delta from the origin (exactly
delta (8R^2 + delta^2) / (2(4R^2 + delta^2))), so a spiral deviation of
amplitude 2K/sqrt(t) in h puts the center at ~ 2 eps_film K / sqrt(t).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spectral_core as sc
from .asymptotics import TimeSeries
from .errors import DegenerateFitError, GeometryError
from .spectral_core import PeriodicField
from .stepping import Trajectory

__all__ = ["CircleFit", "interface_curve", "fit_circle", "center_trajectory"]


@dataclass(frozen=True)
class CircleFit:
    cx: float
    cy: float
    r: float
    rms: float

    @property
    def center_modulus(self) -> float:
        return float(np.hypot(self.cx, self.cy))


def _eval_interpolant(h: PeriodicField, theta: np.ndarray) -> np.ndarray:
    """The trigonometric interpolant of h at arbitrary angles."""
    a = sc.analyze(h.values)
    k = np.arange(1, h.n // 2)
    out = np.full(theta.shape, float(a[0].real))
    out += 2.0 * np.real(np.exp(1j * np.outer(theta, k)) @ a[1:-1])
    # Nyquist coefficient belongs to cos(n/2 theta) alone
    out += float(a[-1].real) * np.cos((h.n // 2) * theta)
    return out


def interface_curve(h: PeriodicField, eps_film: float, m: int) -> np.ndarray:
    """m points of ((1 + eps h(theta)) cos theta, ... sin theta), uniform theta.

    Raises GeometryError when the radius is not everywhere positive.
    """
    if m < 3:
        raise GeometryError("need at least 3 sample points")
    theta = 2.0 * np.pi * np.arange(m) / m
    radius = 1.0 + eps_film * _eval_interpolant(h, theta)
    if np.min(radius) <= 0.0 or 1.0 + eps_film * float(np.min(h.values)) <= 0.0:
        raise GeometryError("interface radius vanishes: 1 + eps_film*h must stay positive")
    return np.column_stack((radius * np.cos(theta), radius * np.sin(theta)))


def fit_circle(points: np.ndarray) -> CircleFit:
    """Algebraic least-squares circle (Kasa): exact on exact circles.

    Minimizes sum (x^2 + y^2 + D x + E y + F)^2; collinear input makes
    the system rank-deficient and raises DegenerateFitError.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
        raise DegenerateFitError("need at least 3 (x, y) points")
    x, y = pts[:, 0], pts[:, 1]
    design = np.column_stack((x, y, np.ones_like(x)))
    target = -(x * x + y * y)
    sol, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    if rank < 3:
        raise DegenerateFitError("points are collinear; no unique circle")
    d_coef, e_coef, f_coef = sol
    cx, cy = -d_coef / 2.0, -e_coef / 2.0
    r2 = cx * cx + cy * cy - f_coef
    if r2 <= 0.0:
        raise DegenerateFitError("degenerate fit: non-positive squared radius")
    r = float(np.sqrt(r2))
    dist = np.hypot(x - cx, y - cy)
    rms = float(np.sqrt(np.mean((dist - r) ** 2)))
    return CircleFit(float(cx), float(cy), r, rms)


def center_trajectory(traj: Trajectory, eps_film: float, m: int = 256) -> TimeSeries:
    """Per-snapshot circle fits; values hold CircleFit objects."""
    fits = np.empty(len(traj.snapshots), dtype=object)
    for i, snap in enumerate(traj.snapshots):
        fits[i] = fit_circle(interface_curve(snap, eps_film, m))
    return TimeSeries(np.asarray(traj.snapshot_times, dtype=float), fits)
