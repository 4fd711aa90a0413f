"""Exception hierarchy shared across the package."""


class TcfilmError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(TcfilmError):
    """Invalid configuration, grid, or parameter combination."""


class DomainError(TcfilmError):
    """Input lies outside the mathematical domain of an operation."""


class PositivityError(TcfilmError):
    """Film thickness is not strictly positive where the model requires it."""


class BlowupError(TcfilmError):
    """Time integration produced a non-finite or runaway state."""


class GeometryError(TcfilmError):
    """Interface curve is invalid (non-positive radius)."""


class DegenerateFitError(TcfilmError):
    """Circle fit attempted on degenerate (collinear) points."""


class FitError(TcfilmError):
    """Asymptotics fit could not be performed."""


class InsufficientDataError(FitError):
    """Too few samples inside the fitting window."""


class CoarseSamplingError(FitError):
    """Phase unwrapping is ambiguous: per-sample rotation exceeds pi."""


class RegimeError(TcfilmError):
    """Model requested in a scaling regime the solver does not support."""
