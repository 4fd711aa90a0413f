"""Right-hand sides dh/dt = -d_theta F[h] for the evolution-equation variants.

All variants share the conservative structure: build the flux F pointwise
on the dealiased grid, dealias it again, differentiate spectrally.  With
Q = h' + h''' the fluxes are

    general_case1 / powerlaw_case1   F = h^2 G(beta_tilde, h Q)
    powerlaw_beta0                   F = h^(alpha+2) |Q|^(alpha-1) Q
    newtonian_pv1                    F = c_shear h^2/2 + c_surf h^3 Q
    mollified                        F = S_eps[ m(h) psi_eps(S_eps[Q]) ]

where S_eps is the Gaussian mollifier and m the cut-off mobility.  The
two case-1 variants integrate the same flux; they differ only in which
evaluation path they exercise (kernel dispatch vs the explicit power-law
antiderivative), and agree to rounding for power-law rheology.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spectral_core as sc
from .errors import ConfigError, DomainError, PositivityError
from .rheology import ConstitutiveLaw, MobilityCutoff, flux_kernel, mobility, psi, psi_eps, psi_prime
from .spectral_core import PeriodicField

__all__ = ["VARIANTS", "ModelSpec", "rhs", "flux_field", "flux_and_driver", "linear_symbol"]

VARIANTS = ("general_case1", "powerlaw_case1", "powerlaw_beta0", "newtonian_pv1", "mollified")
_CASE1 = ("general_case1", "powerlaw_case1")


@dataclass(frozen=True)
class ModelSpec:
    """Which evolution equation is integrated, with its parameters.

    Exactly the fields a variant requires may be set: beta_tilde for the
    case-1 variants, c_shear/c_surf for newtonian_pv1, eps_mol and cutoff
    for the mollified problem.
    """

    variant: str
    law: ConstitutiveLaw
    beta_tilde: float | None = None
    c_shear: float | None = None
    c_surf: float | None = None
    eps_mol: float | None = None
    cutoff: MobilityCutoff | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}")
        need = {
            "general_case1": ("beta_tilde",),
            "powerlaw_case1": ("beta_tilde",),
            "powerlaw_beta0": (),
            "newtonian_pv1": ("c_shear", "c_surf"),
            "mollified": ("eps_mol", "cutoff"),
        }[self.variant]
        for name in ("beta_tilde", "c_shear", "c_surf", "eps_mol", "cutoff"):
            val = getattr(self, name)
            if name in need and val is None:
                raise ConfigError(f"{self.variant} requires {name}")
            if name not in need and val is not None:
                raise ConfigError(f"{self.variant} does not take {name}")
        if self.variant == "newtonian_pv1" and self.law.p != 1.0:
            raise ConfigError("newtonian_pv1 requires a p = 1 law")
        if self.variant == "mollified" and self.eps_mol < 0:
            raise ConfigError("eps_mol must be >= 0")

    # -- concise constructors ------------------------------------------------

    @staticmethod
    def case1(p: float, beta_tilde: float, general: bool = True) -> "ModelSpec":
        variant = "general_case1" if general else "powerlaw_case1"
        return ModelSpec(variant, ConstitutiveLaw(p), beta_tilde=beta_tilde)

    @staticmethod
    def beta0(p: float) -> "ModelSpec":
        return ModelSpec("powerlaw_beta0", ConstitutiveLaw(p))

    @staticmethod
    def newtonian(c_shear: float = 1.0, c_surf: float = 1.0) -> "ModelSpec":
        return ModelSpec(
            "newtonian_pv1", ConstitutiveLaw(1.0, "newtonian"), c_shear=c_shear, c_surf=c_surf
        )

    @staticmethod
    def mollified_spec(p: float, eps_mol: float, h_bar0: float) -> "ModelSpec":
        law = ConstitutiveLaw(p)
        return ModelSpec(
            "mollified", law, eps_mol=eps_mol, cutoff=MobilityCutoff(h_bar0, law.alpha)
        )

    @property
    def requires_positivity(self) -> bool:
        return self.variant != "mollified"


def _powerlaw_case1_flux(p: float, beta: float, h: np.ndarray, q: np.ndarray) -> np.ndarray:
    """h^2 G(beta, h Q) via the explicit power-law antiderivative expression."""
    m = 1.0 / p
    hq = h * q
    small = np.abs(hq) < 1e-2 * abs(beta) if beta != 0.0 else np.zeros_like(hq, dtype=bool)
    if beta == 0.0:
        with np.errstate(divide="ignore", invalid="ignore"):
            g = (p / (2.0 * p + 1.0)) * np.abs(hq) ** (m - 1.0) * hq
        g = np.where(hq == 0.0, 0.0, g)
        return h * h * g
    s1 = beta + hq
    with np.errstate(divide="ignore", invalid="ignore"):
        f2 = (np.sign(s1) * np.abs(s1) ** (m + 2.0) - np.sign(beta) * abs(beta) ** (m + 2.0)) / (
            m + 2.0
        )
        f1 = (np.abs(s1) ** (m + 1.0) - abs(beta) ** (m + 1.0)) / (m + 1.0)
        g = (f2 - beta * f1) / hq**2
    if np.any(small) or np.any(hq == 0.0):
        law = ConstitutiveLaw(p)
        g = np.where(small | (hq == 0.0), flux_kernel(law, beta, hq), g)
    return h * h * g


def _flux_pointwise(spec: ModelSpec, h: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Flux values from dealiased grid samples of h and (possibly smoothed) Q."""
    v = spec.variant
    if v == "general_case1":
        return h * h * flux_kernel(spec.law, spec.beta_tilde, h * q)
    if v == "powerlaw_case1":
        return _powerlaw_case1_flux(spec.law.p, spec.beta_tilde, h, q)
    if v == "powerlaw_beta0":
        return h ** (spec.law.alpha + 2.0) * psi(spec.law, q)
    if v == "newtonian_pv1":
        return spec.c_shear * h * h / 2.0 + spec.c_surf * h**3 * q
    # mollified
    return mobility(spec.cutoff, h) * psi_eps(spec.law.alpha, spec.eps_mol, q)


def _grid_parts(spec: ModelSpec, coeffs: np.ndarray, n: int):
    """Dealiased h, pairing driver Q, and raw flux values for the variant.

    For the mollified variant the driver is the mollified Q: it is both
    the argument of psi_eps and the field the flux pairs against in the
    energy identity (the outer mollifier is self-adjoint).
    """
    k = sc.half_modes(n)
    mask = sc.dealias_mask(n)
    qmul = 1j * (k - k**3)
    qmul[-1] = 0.0
    ch = coeffs * mask
    h = sc.synthesize(ch, n)
    cq = ch * qmul
    if spec.variant == "mollified" and spec.eps_mol > 0.0:
        cq = cq * np.exp(-0.5 * (spec.eps_mol * k) ** 2)
    q = sc.synthesize(cq, n)
    if spec.requires_positivity and np.min(h) <= 0.0:
        raise PositivityError(
            f"{spec.variant} requires strictly positive thickness (min h = {np.min(h):.3g})"
        )
    return h, q, _flux_pointwise(spec, h, q)


def _rhs_coeffs(spec: ModelSpec, coeffs: np.ndarray, n: int) -> np.ndarray:
    """Half-spectrum of -d_theta F[h]; exact zero mean by construction."""
    _, _, f = _grid_parts(spec, coeffs, n)
    k = sc.half_modes(n)
    cf = sc.analyze(f) * sc.dealias_mask(n)
    if spec.variant == "mollified" and spec.eps_mol > 0.0:
        cf = cf * np.exp(-0.5 * (spec.eps_mol * k) ** 2)
    out = -1j * k * cf
    out[-1] = 0.0
    return out


def rhs(spec: ModelSpec, h: PeriodicField) -> PeriodicField:
    """Evolution right-hand side -d_theta F[h] on the grid of h."""
    return PeriodicField(sc.synthesize(_rhs_coeffs(spec, sc.analyze(h.values), h.n), h.n))


def flux_and_driver(spec: ModelSpec, h: PeriodicField) -> tuple[np.ndarray, np.ndarray]:
    """Raw flux samples and the driver field they pair with in dE/dt = -int F Q."""
    hd, q, f = _grid_parts(spec, sc.analyze(h.values), h.n)
    return f, q


def flux_field(spec: ModelSpec, h: PeriodicField) -> PeriodicField:
    """The pointwise flux F[h] as a field (before the final dealias)."""
    f, _ = flux_and_driver(spec, h)
    return PeriodicField(f)


def linear_symbol(spec: ModelSpec, c: float, k: int) -> complex:
    """Exact linearization of rhs about h = c: mode-k eigenvalue.

    Case-1:     lambda_k = -i k c psi(beta_tilde) + (c^3 psi'(beta_tilde)/3)(k^2 - k^4)
    Newtonian:  lambda_k = -i k c_shear c + c_surf c^3 (k^2 - k^4)
    Mollified:  lambda_k = m(c) eps_mol^(alpha-1) exp(-(eps_mol k)^2) (k^2 - k^4)
                (psi_eps has slope eps^(alpha-1) at 0; the two mollifier
                passes each contribute exp(-(eps k)^2 / 2))

    powerlaw_beta0 has no classical linearization about a constant state:
    the directional derivative of the flux scales like delta^alpha, so it
    vanishes (alpha > 1) or blows up (alpha < 1) as delta -> 0.  The same
    holds for mollified at eps_mol = 0 unless alpha = 1.
    """
    if k != int(k):
        raise ConfigError(f"mode index must be an integer, got {k}")
    kk = float(k)
    lap = kk * kk - kk**4
    if spec.variant in _CASE1:
        if spec.beta_tilde == 0.0 and spec.law.p > 1.0:
            raise DomainError("linearization singular: psi' diverges at beta_tilde = 0 for p > 1")
        a0 = c**3 * psi_prime(spec.law, spec.beta_tilde) / 3.0
        return complex(-1j * kk * c * psi(spec.law, spec.beta_tilde) + a0 * lap)
    if spec.variant == "newtonian_pv1":
        return complex(-1j * kk * spec.c_shear * c + spec.c_surf * c**3 * lap)
    if spec.variant == "mollified":
        alpha = spec.law.alpha
        if spec.eps_mol == 0.0 and alpha != 1.0:
            raise DomainError("linearization singular: psi' at 0 is 0 or infinite for eps_mol = 0")
        slope = spec.eps_mol ** (alpha - 1.0) if alpha != 1.0 else 1.0
        damp = np.exp(-((spec.eps_mol * kk) ** 2))
        return complex(mobility(spec.cutoff, c) * slope * damp * lap)
    raise DomainError(
        "powerlaw_beta0 has no classical linearization about a constant state"
    )
