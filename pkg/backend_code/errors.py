"""
Errors for GaugeSim
Exception hierarchy shared by the numerical backend and the command-line front end.
"""


class GaugeSimError(Exception):
    """Base class for every error raised by GaugeSim."""


class InvalidParameter(GaugeSimError, ValueError):
    """A physical or numerical input was outside its allowed range."""


class InvalidState(GaugeSimError):
    """A Gaussian state violates shape, symmetry or uncertainty constraints."""


class DynamicalInstabilityError(GaugeSimError):
    """A static quadratic Hamiltonian is not bounded from below."""


class IntegrationError(GaugeSimError):
    """The moment integrator failed or produced an unphysical covariance."""


class ConvergenceError(GaugeSimError):
    """The truncated Fock oracle did not converge within its configured limits."""

    def __init__(self, message: str, drift: float = float("nan")):
        super().__init__(message)
        self.drift = drift


class ConfigError(GaugeSimError):
    """A run configuration could not be parsed or validated."""
