"""Exception types shared across the package."""


class BesselLabError(Exception):
    """Base class for all package errors."""


class DomainError(BesselLabError, ValueError):
    """Parameters outside the admissible range."""


class CutoffNonconvergenceError(BesselLabError):
    """Subordination integral did not settle under node doubling."""


class FitFailureError(BesselLabError):
    """A least-squares fit did not reach the required quality."""


class QuadratureError(BesselLabError):
    """Quadrature could not be carried out reliably."""


class InconclusiveDivergenceError(BesselLabError):
    """Cutoff sequence neither converged nor diverged clearly."""


class EnvelopeViolation(BesselLabError):
    """A rearrangement exceeded its claimed envelope."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class ConfigError(BesselLabError):
    """Malformed or inconsistent configuration."""
