"""Numerical laboratory for thin-film interface equations on the circle.

The package integrates the family of degenerate fourth-order evolution
equations dh/dt = -d_theta F[h] arising for the interface of a thin
power-law fluid film between rotating cylinders, tracks the conserved
and dissipated functionals, and fits the two long-time behaviours:
finite-time convergence to a circle (shear-thickening) and slow spiral
asymptotics on the center manifold of circles (non-degenerate case).
"""

from .asymptotics import (
    FitReport,
    TimeSeries,
    extinction_window,
    fit_extinction,
    fit_spiral,
    manifold_ratio,
    rotating_frame,
    spiral_window,
)
from .diagnostics import (
    DiagnosticsSeries,
    dissipation_rate,
    energy,
    energy_balance_residual,
    fourier_mode,
    mass,
)
from .errors import (
    BlowupError,
    CoarseSamplingError,
    ConfigError,
    DegenerateFitError,
    DomainError,
    FitError,
    GeometryError,
    InsufficientDataError,
    PositivityError,
    RegimeError,
    TcfilmError,
)
from .geometry import CircleFit, center_trajectory, fit_circle, interface_curve
from .models import ModelSpec, flux_field, linear_symbol, rhs
from .rheology import (
    ConstitutiveLaw,
    MobilityCutoff,
    flux_kernel,
    flux_kernel_quad,
    mobility,
    psi,
    psi_eps,
    psi_prime,
)
from .scaling import (
    PhysicalSetup,
    ScalingReport,
    classify_regime,
    model_from_report,
    nondimensionalize,
    rescale_case1,
    rescale_case2_time,
    spiral_in_original_variables,
)
from .spectral_core import (
    PeriodicField,
    Spectrum,
    dealias,
    derivative,
    from_spectrum,
    grid,
    mollify,
    q_operator,
    to_spectrum,
)
from .stepping import (
    Event,
    SolverConfig,
    Trajectory,
    advance,
    stability_dt,
    step_etdrk2,
    step_rk4,
)

__version__ = "0.1.0"

__all__ = [
    "BlowupError",
    "CircleFit",
    "CoarseSamplingError",
    "ConfigError",
    "ConstitutiveLaw",
    "DegenerateFitError",
    "DiagnosticsSeries",
    "DomainError",
    "Event",
    "FitError",
    "FitReport",
    "GeometryError",
    "InsufficientDataError",
    "MobilityCutoff",
    "ModelSpec",
    "PeriodicField",
    "PhysicalSetup",
    "PositivityError",
    "RegimeError",
    "ScalingReport",
    "SolverConfig",
    "Spectrum",
    "TcfilmError",
    "TimeSeries",
    "Trajectory",
    "advance",
    "center_trajectory",
    "classify_regime",
    "dealias",
    "derivative",
    "dissipation_rate",
    "energy",
    "energy_balance_residual",
    "extinction_window",
    "fit_circle",
    "fit_extinction",
    "fit_spiral",
    "flux_field",
    "flux_kernel",
    "flux_kernel_quad",
    "fourier_mode",
    "from_spectrum",
    "grid",
    "interface_curve",
    "linear_symbol",
    "manifold_ratio",
    "mass",
    "mobility",
    "model_from_report",
    "mollify",
    "nondimensionalize",
    "psi",
    "psi_eps",
    "psi_prime",
    "q_operator",
    "rescale_case1",
    "rescale_case2_time",
    "rhs",
    "rotating_frame",
    "spiral_in_original_variables",
    "spiral_window",
    "stability_dt",
    "step_etdrk2",
    "step_rk4",
    "to_spectrum",
]
