"""
Transit scenarios for GaugeSim
Handles a dipole moving uniformly through a Gaussian cavity mode: the transit
envelope, the Lagrangian-level (tilde) correction term, the gauge in which the
two Hamiltonian families agree, and orientation averaging.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from backend_code.errors import InvalidParameter
from backend_code.model import (
    CouplingEnvelope,
    GaussianTransit,
    ModelParams,
    envelope_derivative,
    envelope_value,
)

logger = logging.getLogger(__name__)

MAX_INITIAL_COUPLING = 1e-10
DEFAULT_OFFSET_H = 5.0

SPEED_OF_LIGHT = 299_792_458.0
HBAR_EV_S = 6.582_119_569e-16


@dataclass(frozen=True)
class TransitScenario:
    """Dimensionless description of a uniform transit through the cavity beam."""

    ratio_wc: float
    offset_h: float = DEFAULT_OFFSET_H
    theta: float = 0.5 * math.pi

    def __post_init__(self):
        if not math.isfinite(self.ratio_wc) or self.ratio_wc <= 0:
            raise InvalidParameter(f"ratio_wc must be > 0, got {self.ratio_wc}")
        if not math.isfinite(self.offset_h):
            raise InvalidParameter(f"offset_h must be finite, got {self.offset_h}")
        if not 0.0 <= self.theta <= math.pi:
            raise InvalidParameter(f"theta must lie in [0, pi], got {self.theta}")

    @property
    def transit_time(self) -> float:
        """Beam transit time t_b = w_c / nu in units of 1/omega_m."""
        return self.ratio_wc

    @property
    def peak_time(self) -> float:
        """Time at which the dipole crosses the beam axis."""
        return self.offset_h * self.ratio_wc


@dataclass(frozen=True)
class Variant:
    """Which Hamiltonian family drives the dynamics: H^alpha or the tilde family."""

    kind: str = "standard"
    theta: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("standard", "tilde", "tilde-averaged"):
            raise InvalidParameter(f"unknown variant '{self.kind}'")
        if self.kind == "tilde":
            if self.theta is None or not 0.0 <= self.theta <= math.pi:
                raise InvalidParameter(f"tilde variant needs theta in [0, pi], got {self.theta}")

    @classmethod
    def standard(cls) -> "Variant":
        return cls("standard")

    @classmethod
    def tilde(cls, theta: float) -> "Variant":
        return cls("tilde", theta)

    @classmethod
    def tilde_averaged(cls) -> "Variant":
        return cls("tilde-averaged")

    @property
    def is_tilde(self) -> bool:
        return self.kind != "standard"

    def orientation_factor(self) -> float:
        """cos^2(theta), or its uniform orientation average for the averaged variant."""
        if self.kind == "tilde":
            return equality_gauge(self.theta)
        if self.kind == "tilde-averaged":
            return averaged_orientation_factor()
        return 0.0

    def label(self) -> str:
        if self.kind == "tilde":
            return f"tilde(theta={self.theta!r})"
        return self.kind


def transit_envelope(sc: TransitScenario) -> GaussianTransit:
    """Gaussian transit envelope with w_c as the length unit and nu = 1/ratio_wc."""
    env = GaussianTransit(h=sc.offset_h, nu=1.0 / sc.ratio_wc, w_c=1.0)
    mu0 = envelope_value(env, 0.0)
    if mu0 >= MAX_INITIAL_COUPLING:
        raise InvalidParameter(
            f"transit starts inside the beam: mu(0) = {mu0:.3e} >= {MAX_INITIAL_COUPLING:.0e}; "
            f"increase offset_h (currently {sc.offset_h})"
        )
    return env


def equality_gauge(theta: float) -> float:
    """Gauge alpha = cos^2(theta) for which the tilde Hamiltonian equals H^alpha."""
    if not 0.0 <= theta <= math.pi:
        raise InvalidParameter(f"theta must lie in [0, pi], got {theta}")
    return math.cos(theta) ** 2


def averaged_orientation_factor() -> float:
    """Average of cos^2(theta) over dipole orientations uniform in the polarization plane."""
    return 0.5


def correction_at(params: ModelParams, mu_dot: float, alpha: float, orientation: float) -> float:
    """kappa for a given envelope slope; coefficient of (a^dag + a)(b^dag + b)."""
    return -0.5 * params.eta_max * mu_dot * np.sqrt(params.delta) * (alpha - orientation)


def tilde_correction_coefficient(params: ModelParams, env: CouplingEnvelope, t: float,
                                 alpha: float, theta: Optional[float]) -> float:
    """Correction kappa(t) of the tilde family; theta=None selects the orientation average."""
    orientation = averaged_orientation_factor() if theta is None else equality_gauge(theta)
    return correction_at(params, envelope_derivative(env, t), alpha, orientation)


def si_transit_ratio(w_c_m: float, speed_fraction_c: float, omega_m_ev: float) -> float:
    """Dimensionless w_c * omega_m / nu from a waist in metres, a speed in units of c and hbar*omega_m in eV."""
    if w_c_m <= 0 or speed_fraction_c <= 0 or omega_m_ev <= 0:
        raise InvalidParameter("waist, speed and matter frequency must all be positive")
    omega_m = omega_m_ev / HBAR_EV_S
    return w_c_m * omega_m / (speed_fraction_c * SPEED_OF_LIGHT)
