"""Periodic grid and Fourier tooling on the circle.

Fields live on the uniform grid theta_j = 2*pi*j/n.  The coefficient
convention throughout is

    a_k = (1/2pi) int_{S^1} f(theta) e^{-ik theta} dtheta,

so a constant field c has a_0 = c and cos(k theta) has a_{+-k} = 1/2.
Internally most routines work on the real-FFT half spectrum a_0..a_{n/2}
normalized to that convention; the `Spectrum` type exposes the full
two-sided layout k = -n/2 .. n/2-1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = [
    "PeriodicField",
    "Spectrum",
    "grid",
    "analyze",
    "synthesize",
    "half_modes",
    "dealias_mask",
    "to_spectrum",
    "from_spectrum",
    "derivative",
    "q_operator",
    "mollify",
    "dealias",
]


def _check_grid_size(n: int) -> None:
    if n % 2 != 0 or n < 16:
        raise ConfigError(f"grid size must be even and >= 16, got {n}")


def grid(n: int) -> np.ndarray:
    """Sample angles theta_j = 2*pi*j/n, j = 0..n-1."""
    _check_grid_size(n)
    return 2.0 * np.pi * np.arange(n) / n


@dataclass(frozen=True)
class PeriodicField:
    """Real samples of a field on the uniform grid of S^1."""

    values: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.values, dtype=float))
        _check_grid_size(v.size)
        if not np.all(np.isfinite(v)):
            raise ConfigError("field values must be finite")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def theta(self) -> np.ndarray:
        return grid(self.n)


@dataclass(frozen=True)
class Spectrum:
    """Two-sided Fourier coefficients a_k for k = -n/2 .. n/2 - 1.

    Index j of `coeffs` holds the mode k = j - n/2.  Conjugate symmetry
    a_{-k} = conj(a_k) and real a_0 hold for spectra of real fields.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.ascontiguousarray(np.asarray(self.coeffs, dtype=complex))
        _check_grid_size(c.size)
        object.__setattr__(self, "coeffs", c)

    @property
    def n(self) -> int:
        return self.coeffs.size

    @property
    def k(self) -> np.ndarray:
        return np.arange(-self.n // 2, self.n // 2)

    def mode(self, k: int) -> complex:
        """Coefficient a_k; the Nyquist mode is stored at k = -n/2."""
        half = self.n // 2
        if k == half:
            # a_{+n/2} shares the (real) Nyquist coefficient with a_{-n/2}
            return complex(np.conj(self.coeffs[0]))
        if not -half <= k < half:
            raise ConfigError(f"mode {k} outside spectrum range [-{half}, {half})")
        return complex(self.coeffs[k + half])


# --- half-spectrum helpers (workhorses for models/stepping) ---------------


def half_modes(n: int) -> np.ndarray:
    """Wavenumbers 0..n/2 of the real-FFT half spectrum, as floats."""
    return np.arange(n // 2 + 1, dtype=float)


def analyze(values: np.ndarray) -> np.ndarray:
    """Half-spectrum coefficients a_0..a_{n/2} of real samples."""
    return np.fft.rfft(values) / values.size


def synthesize(coeffs: np.ndarray, n: int) -> np.ndarray:
    """Real samples from half-spectrum coefficients (inverse of analyze)."""
    return np.fft.irfft(coeffs * n, n)


def dealias_mask(n: int) -> np.ndarray:
    """Two-thirds-rule mask on the half spectrum: 1 for k <= n//3, else 0."""
    return (np.arange(n // 2 + 1) <= n // 3).astype(float)


# --- public operations -----------------------------------------------------


def to_spectrum(f: PeriodicField) -> Spectrum:
    """Fourier coefficients of f in the two-sided layout.

    Built from the real FFT so that conjugate symmetry and a real a_0
    hold exactly, not merely to rounding.
    """
    n = f.n
    half = analyze(f.values)
    half[0] = half[0].real
    if n % 2 == 0:
        half[-1] = half[-1].real
    full = np.empty(n, dtype=complex)
    full[n // 2 :] = half[: n // 2]  # k = 0 .. n/2-1
    full[1 : n // 2] = np.conj(half[1 : n // 2][::-1])  # k = -n/2+1 .. -1
    full[0] = half[-1]  # Nyquist stored at k = -n/2
    return Spectrum(full)


def from_spectrum(s: Spectrum, n: int) -> PeriodicField:
    """Synthesize a field of size n from a spectrum of size <= n."""
    _check_grid_size(n)
    if n < s.n:
        raise ConfigError(f"target grid {n} smaller than spectrum size {s.n}")
    half = np.zeros(n // 2 + 1, dtype=complex)
    m = s.n
    half[: m // 2] = s.coeffs[m // 2 :]
    nyq = s.coeffs[0].real
    if n == m:
        half[m // 2] = nyq
    else:
        # k = m/2 is a regular (non-Nyquist) mode of the larger grid, so the
        # symmetric cos interpretation of the old Nyquist content applies
        half[m // 2] = nyq / 2.0
    return PeriodicField(synthesize(half, n))


def derivative(f: PeriodicField, order: int) -> PeriodicField:
    """Spectral derivative of the given order (1 to 4).

    Odd orders zero the Nyquist mode (its derivative has no consistent
    sign on the real grid); every order kills the mean exactly.
    """
    if order not in (1, 2, 3, 4):
        raise ConfigError(f"derivative order must be in 1..4, got {order}")
    n = f.n
    k = half_modes(n)
    mult = (1j * k) ** order
    if order % 2 == 1:
        mult[-1] = 0.0
    return PeriodicField(synthesize(analyze(f.values) * mult, n))


def q_operator(f: PeriodicField) -> PeriodicField:
    """Surface-tension driver Q[f] = f' + f''', multiplier i(k - k^3).

    Annihilates constants and the two first harmonics exactly.
    """
    n = f.n
    k = half_modes(n)
    mult = 1j * (k - k**3)
    mult[-1] = 0.0
    return PeriodicField(synthesize(analyze(f.values) * mult, n))


def mollify(f: PeriodicField, eps_mol: float) -> PeriodicField:
    """Gaussian smoothing, multiplier exp(-(eps*k)^2/2); preserves the mean.

    eps_mol = 0 returns the samples unchanged.
    """
    if eps_mol < 0:
        raise ConfigError(f"mollifier width must be >= 0, got {eps_mol}")
    if eps_mol == 0.0:
        return PeriodicField(f.values.copy())
    n = f.n
    k = half_modes(n)
    coeffs = analyze(f.values)
    out = coeffs * np.exp(-0.5 * (eps_mol * k) ** 2)
    out[0] = coeffs[0]  # mean preserved bit-exactly
    return PeriodicField(synthesize(out, n))


def dealias(f: PeriodicField) -> PeriodicField:
    """Zero all modes with |k| > n/3 (two-thirds rule); idempotent."""
    n = f.n
    return PeriodicField(synthesize(analyze(f.values) * dealias_mask(n), n))
