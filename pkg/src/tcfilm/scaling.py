"""Physical parameters -> dimensionless groups -> regime -> rescalings.

Starting from the raw geometry and material constants the dimensionless
groups are

    eps_film = d/R-          eta = R+/R-         rho = rho-/rho+
    Re  = rho+ omega R-^2 / mu+                  tau = tau_char omega
    mu  = mu0/mu+            gamma = gamma~/(rho+ R-^3 omega^2)
    D   = 2 eta^2/(eta^2-1)  A = tau D / mu      B = tau eps^2 gamma Re / mu
    beta = A/B               beta_tilde = B beta (= A)

beta measures surface tension against shear.  beta of order one is the
non-degenerate regime (case 1); small beta splits by B into the two
surface-tension-dominated limits; large beta is out of scope.  Note the
widely printed "physical form" of beta_tilde (D R- omega^2 mu+ tau_char
/ mu0) is dimensionally inconsistent; B*beta is the consistent value.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, DomainError, RegimeError
from .models import ModelSpec

__all__ = [
    "PhysicalSetup",
    "ScalingReport",
    "nondimensionalize",
    "classify_regime",
    "model_from_report",
    "rescale_case1",
    "rescale_case2_time",
    "spiral_in_original_variables",
]

REGIMES = ("case1", "case2_smallB", "case2_largeB", "case3_unsupported")


@dataclass(frozen=True)
class PhysicalSetup:
    """SI-unit description of the apparatus and fluids."""

    r_minus: float  # m, inner cylinder radius
    r_plus: float  # m, outer cylinder radius
    d: float  # m, mean inner-film thickness
    omega: float  # 1/s, rotation rate
    mu0: float  # Pa s, inner-fluid consistency
    mu_plus: float  # Pa s, outer-fluid viscosity
    rho_minus: float  # kg/m^3
    rho_plus: float  # kg/m^3
    gamma_tilde: float  # N/m, interfacial tension
    tau_char: float  # s, characteristic time
    p: float  # power-law exponent

    def __post_init__(self):
        bad = [
            name
            for name in (
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
            )
            if not (getattr(self, name) > 0 and math.isfinite(getattr(self, name)))
        ]
        if self.r_plus <= self.r_minus:
            bad.append("r_plus (must exceed r_minus)")
        if self.d >= self.r_minus:
            bad.append("d (must be below r_minus)")
        if bad:
            raise ConfigError("invalid physical setup: " + ", ".join(bad))


@dataclass(frozen=True)
class ScalingReport:
    eps_film: float
    eta: float
    rho: float
    re: float
    tau: float
    mu: float
    gamma: float
    d_geom: float
    a_group: float
    b_group: float
    beta: float
    beta_tilde: float
    regime: str
    p: float


def nondimensionalize(phys: PhysicalSetup) -> ScalingReport:
    """All dimensionless groups of a setup, with its regime attached."""
    eps = phys.d / phys.r_minus
    eta = phys.r_plus / phys.r_minus
    rho = phys.rho_minus / phys.rho_plus
    re = phys.rho_plus * phys.omega * phys.r_minus**2 / phys.mu_plus
    tau = phys.tau_char * phys.omega
    mu = phys.mu0 / phys.mu_plus
    gamma = phys.gamma_tilde / (phys.rho_plus * phys.r_minus**3 * phys.omega**2)
    d_geom = 2.0 * eta**2 / (eta**2 - 1.0)
    a_group = tau * d_geom / mu
    b_group = tau * eps**2 * gamma * re / mu
    beta = a_group / b_group
    beta_tilde = b_group * beta
    if re > 50.0:
        warnings.warn(
            f"Re = {re:.3g} > 50: outside the creeping-flow range the thin-film "
            "reduction assumes",
            stacklevel=2,
        )
    rep = ScalingReport(
        eps_film=eps,
        eta=eta,
        rho=rho,
        re=re,
        tau=tau,
        mu=mu,
        gamma=gamma,
        d_geom=d_geom,
        a_group=a_group,
        b_group=b_group,
        beta=beta,
        beta_tilde=beta_tilde,
        regime="",
        p=phys.p,
    )
    return replace(rep, regime=classify_regime(rep))


def classify_regime(
    rep: ScalingReport,
    beta_lo: float = 0.1,
    beta_hi: float = 10.0,
    b_lo: float = 0.1,
    b_hi: float = 10.0,
) -> str:
    """Which asymptotic regime the dimensionless groups fall in.

    beta in [beta_lo, beta_hi] is case1; beta above beta_hi is out of
    scope; small beta splits by B, with the geometric midpoint of
    [b_lo, b_hi] as the dividing line when B sits between the markers.
    """
    if rep.beta > beta_hi:
        return "case3_unsupported"
    if rep.beta >= beta_lo:
        return "case1"
    return "case2_smallB" if rep.b_group < math.sqrt(b_lo * b_hi) else "case2_largeB"


def model_from_report(rep: ScalingReport) -> ModelSpec:
    """The evolution model a regime calls for; case 3 is refused."""
    regime = rep.regime or classify_regime(rep)
    if regime == "case1":
        return ModelSpec.case1(rep.p, rep.beta_tilde)
    if regime in ("case2_smallB", "case2_largeB"):
        return ModelSpec.beta0(rep.p)
    raise RegimeError(
        f"beta = {rep.beta:.4g} is outside the supported range; no model for {regime}"
    )


def rescale_case1(h, t, b_group: float, eps_film: float, tau: float, inverse: bool = False):
    """Case-1 change of variables h~ = sqrt(B) h, t~ = (eps/tau) t / sqrt(B)."""
    if b_group <= 0:
        raise DomainError("B must be positive")
    rb = math.sqrt(b_group)
    fac_t = (eps_film / tau) / rb
    if inverse:
        return np.asarray(h) / rb, np.asarray(t) / fac_t
    return np.asarray(h) * rb, np.asarray(t) * fac_t


def rescale_case2_time(
    t, b_group: float, p: float, eps_film: float, tau: float, inverse: bool = False
):
    """Case-2 time rescaling t~ = (eps/tau) B^(1/p) t."""
    if b_group <= 0:
        raise DomainError("B must be positive")
    fac = (eps_film / tau) * b_group ** (1.0 / p)
    return np.asarray(t) / fac if inverse else np.asarray(t) * fac


def spiral_in_original_variables(
    k_const: float,
    ktilde: float,
    c0: float,
    c: float,
    b_group: float,
    eps_film: float,
    tau: float,
    t: float,
    psi_beta: float,
) -> dict[str, float]:
    """Instantaneous circle parameters in the original non-dimensional frame.

    With lambda = 1/sqrt(B) and s = (eps/tau) lambda t the rescaled-time
    argument, the interface behaves like the circle of radius
    r0 = 1 + eps_film lambda c centred at distance

        sigma(t) = 2 K eps_film lambda / sqrt(s)

    from the origin, at phase theta0 = c psi_beta s + Ktilde log s + C0.
    psi_beta is the constitutive function evaluated at the equation's
    beta argument (it rides along because the report stores only fitted
    constants, not the law).
    """
    if t <= 0:
        raise DomainError("t must be positive")
    if b_group <= 0:
        raise DomainError("B must be positive")
    lam = 1.0 / math.sqrt(b_group)
    s = (eps_film / tau) * lam * t
    sigma = 2.0 * k_const * eps_film * lam / math.sqrt(s)
    theta0 = c * psi_beta * s + ktilde * math.log(s) + c0
    r0 = 1.0 + eps_film * lam * c
    return {"sigma": sigma, "theta0": theta0, "r0": r0}
