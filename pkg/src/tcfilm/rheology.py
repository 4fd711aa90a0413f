"""Constitutive functions for power-law films and the flux kernel G.

The rheology enters the interface equation through

    psi(s)     = |s|^(1/p - 1) s          (strictly increasing, odd)
    G(beta, q) = int_0^1 z psi(beta + z q) dz

with p the flow-behaviour exponent (p > 1 shear-thickening) and
alpha = 1/p.  G has a closed form through the antiderivatives of psi;
evaluating it stably near q = 0 is the delicate part and is what most
of `flux_kernel` deals with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError

__all__ = [
    "ConstitutiveLaw",
    "MobilityCutoff",
    "psi",
    "psi_prime",
    "psi_eps",
    "mobility",
    "flux_kernel",
    "flux_kernel_quad",
]

_KINDS = ("power_law", "newtonian")

# Taylor coefficients of G(beta, q) in q: psi^(k)(beta) * q^k / ((k+2) k!)
_TAYLOR_W = (1.0 / 2.0, 1.0 / 3.0, 1.0 / 8.0, 1.0 / 30.0, 1.0 / 144.0, 1.0 / 840.0)
# closed form loses ~(beta/q)^2 ulps to cancellation; the series only
# converges for |q| < |beta|, so switch well inside both limits
_TAYLOR_CUT = 1e-2


@dataclass(frozen=True)
class ConstitutiveLaw:
    """Power-law rheology with exponent p; alpha = 1/p."""

    p: float = 1.0
    kind: str = "power_law"

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ConfigError(f"unknown law kind {self.kind!r}")
        if not (np.isfinite(self.p) and self.p > 0):
            raise ConfigError(f"flow-behaviour exponent must be positive, got {self.p}")
        if self.kind == "newtonian" and self.p != 1.0:
            raise ConfigError("newtonian law requires p = 1")

    @property
    def alpha(self) -> float:
        return 1.0 / self.p


@dataclass(frozen=True)
class MobilityCutoff:
    """Regularized mobility: m(s) = |s|^(alpha+2) exactly for |s| >= h_bar0/2,
    smoothly ramped to 0 below, never exceeding |s|^(alpha+2)."""

    h_bar0: float
    alpha: float

    def __post_init__(self):
        if not (np.isfinite(self.h_bar0) and self.h_bar0 > 0):
            raise ConfigError(f"reference thickness must be positive, got {self.h_bar0}")
        if not (np.isfinite(self.alpha) and self.alpha > 0):
            raise ConfigError(f"alpha must be positive, got {self.alpha}")


def psi(law: ConstitutiveLaw, s):
    """Odd increasing nonlinearity |s|^(1/p-1) s, with psi(0) = 0."""
    m = 1.0 / law.p
    if m == 1.0:
        return np.multiply(s, 1.0) if isinstance(s, np.ndarray) else float(s)
    arr = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.abs(arr) ** (m - 1.0) * arr
    out = np.where(arr == 0.0, 0.0, out)
    return out if isinstance(s, np.ndarray) else float(out)


def psi_prime(law: ConstitutiveLaw, s):
    """Derivative (1/p)|s|^(1/p-1); singular at 0 for p > 1."""
    m = 1.0 / law.p
    arr = np.asarray(s, dtype=float)
    if m < 1.0 and np.any(arr == 0.0):
        raise DomainError("psi' is singular at s = 0 for p > 1")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = m * np.abs(arr) ** (m - 1.0)
    out = np.where(arr == 0.0, 0.0 if m > 1.0 else 1.0 if m == 1.0 else np.inf, out)
    return out if isinstance(s, np.ndarray) else float(out)


def psi_eps(alpha: float, eps: float, s):
    """Smoothed nonlinearity (s^2 + eps^2)^((alpha-1)/2) s."""
    if not alpha > 0:
        raise ConfigError(f"alpha must be positive, got {alpha}")
    if eps < 0:
        raise ConfigError(f"eps must be >= 0, got {eps}")
    arr = np.asarray(s, dtype=float)
    if eps == 0.0:
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.abs(arr) ** (alpha - 1.0) * arr
        out = np.where(arr == 0.0, 0.0, out)
    else:
        out = (arr * arr + eps * eps) ** ((alpha - 1.0) / 2.0) * arr
    return out if isinstance(s, np.ndarray) else float(out)


def _smoothstep(x):
    """C-infinity ramp: 0 for x <= 0, 1 for x >= 1, strictly rising between."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        b0 = np.where(x > 0.0, np.exp(-1.0 / np.maximum(x, 1e-300)), 0.0)
        b1 = np.where(x < 1.0, np.exp(-1.0 / np.maximum(1.0 - x, 1e-300)), 0.0)
    with np.errstate(invalid="ignore"):
        out = np.where(x <= 0.0, 0.0, np.where(x >= 1.0, 1.0, b0 / (b0 + b1)))
    return out


def mobility(cutoff: MobilityCutoff, s):
    """Cut-off mobility m(s): the pure power |s|^(alpha+2) away from zero,
    ramped smoothly to zero on |s| < h_bar0/2 (ramp support [h_bar0/4, h_bar0/2])."""
    arr = np.asarray(s, dtype=float)
    power = np.abs(arr) ** (cutoff.alpha + 2.0)
    lo = cutoff.h_bar0 / 4.0
    hi = cutoff.h_bar0 / 2.0
    ramp = _smoothstep((np.abs(arr) - lo) / (hi - lo))
    out = power * ramp
    return out if isinstance(s, np.ndarray) else float(out)


def _psi_derivs(m: float, beta: float, count: int) -> list[float]:
    """psi^(k)(beta) for k = 0..count-1 at beta != 0 (power law, m = 1/p)."""
    out = []
    coef = 1.0
    sgn = 1.0 if beta > 0 else -1.0
    for k in range(count):
        out.append(coef * abs(beta) ** (m - k) * sgn ** (k + 1))
        coef *= m - k
    return out


def flux_kernel(law: ConstitutiveLaw, beta: float, q):
    """G(beta, q) = int_0^1 z psi(beta + z q) dz, power-law closed form.

    Vectorized in q.  Branches:
      * q = 0           -> psi(beta)/2 (exact limit)
      * beta = 0        -> (p/(2p+1)) |q|^(1/p-1) q (exact antiderivative)
      * |q| < 0.01|beta|-> 6-term Taylor series in q (closed form cancels)
      * otherwise       -> antiderivative form
        G = [(F2(beta+q) - F2(beta)) - beta (F1(beta+q) - F1(beta))] / q^2
        with F1 = |s|^(m+1)/(m+1), F2 = sign(s)|s|^(m+2)/(m+2), m = 1/p.
    """
    if not (np.isfinite(beta) and np.all(np.isfinite(q))):
        raise DomainError("flux_kernel requires finite beta and q")
    m = 1.0 / law.p
    scalar = not isinstance(q, np.ndarray)
    qa = np.atleast_1d(np.asarray(q, dtype=float))
    out = np.empty_like(qa)

    if m == 1.0:
        out[:] = beta / 2.0 + qa / 3.0
        return float(out[0]) if scalar else out.reshape(np.shape(q))

    if beta == 0.0:
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (law.p / (2.0 * law.p + 1.0)) * np.abs(qa) ** (m - 1.0) * qa
        out = np.where(qa == 0.0, 0.0, out)
        return float(out[0]) if scalar else out.reshape(np.shape(q))

    psi_beta = abs(beta) ** (m - 1.0) * beta
    zero = qa == 0.0
    small = (~zero) & (np.abs(qa) < _TAYLOR_CUT * abs(beta))
    big = ~(zero | small)

    out[zero] = 0.5 * psi_beta

    if np.any(small):
        derivs = _psi_derivs(m, beta, 6)
        qs = qa[small]
        acc = np.zeros_like(qs)
        for k in range(5, -1, -1):
            acc = acc * qs + derivs[k] * _TAYLOR_W[k]
        out[small] = acc

    if np.any(big):
        qb = qa[big]
        s1 = beta + qb
        f1 = lambda s: np.abs(s) ** (m + 1.0) / (m + 1.0)
        f2 = lambda s: np.sign(s) * np.abs(s) ** (m + 2.0) / (m + 2.0)
        out[big] = ((f2(s1) - f2(beta)) - beta * (f1(s1) - f1(beta))) / qb**2

    return float(out[0]) if scalar else out.reshape(np.shape(q))


def flux_kernel_quad(psi_fn, beta: float, q: float, order: int = 32) -> float:
    """G(beta, q) by Gauss-Legendre quadrature, split at the kink of psi.

    Generic-law path: psi_fn is any callable s -> psi(s).  The z interval
    splits at z0 = -beta/q when the argument of psi changes sign inside
    (0, 1); each piece uses `order` nodes.  For fractional power laws the
    kink still limits accuracy (the integrand is only Holder there), so
    tests use an adaptive oracle for those cases.
    """
    if not (math.isfinite(beta) and math.isfinite(q)):
        raise DomainError("flux_kernel_quad requires finite beta and q")
    nodes, weights = np.polynomial.legendre.leggauss(order)

    def piece(a: float, b: float) -> float:
        mid = 0.5 * (a + b)
        rad = 0.5 * (b - a)
        z = mid + rad * nodes
        return rad * float(np.sum(weights * z * psi_fn(beta + z * q)))

    if q == 0.0:
        return 0.5 * float(psi_fn(beta))
    z0 = -beta / q
    if 0.0 < z0 < 1.0:
        return piece(0.0, z0) + piece(z0, 1.0)
    return piece(0.0, 1.0)
