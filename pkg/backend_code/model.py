"""
Model definitions for GaugeSim
Handles model parameters, coupling envelopes and the time-dependent coefficients
of the alpha-gauge light-matter Hamiltonian family.

Units: hbar = 1 and omega_m = 1, so every time is in 1/omega_m and every energy
in omega_m. The cavity frequency is omega = delta.
"""

import logging
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from backend_code.errors import InvalidParameter

logger = logging.getLogger(__name__)

OMEGA_M = 1.0


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless configuration (delta, eta_max, alpha) of the two-mode model."""

    delta: float
    eta_max: float
    alpha: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.delta) or self.delta <= 0:
            raise InvalidParameter(f"delta must be > 0, got {self.delta}")
        if not math.isfinite(self.eta_max) or self.eta_max < 0:
            raise InvalidParameter(f"eta_max must be >= 0, got {self.eta_max}")
        if not math.isfinite(self.alpha):
            raise InvalidParameter(f"alpha must be finite, got {self.alpha}")

    @property
    def omega(self) -> float:
        """Cavity frequency in units of omega_m."""
        return self.delta * OMEGA_M

    @property
    def omega_m(self) -> float:
        return OMEGA_M

    def with_alpha(self, alpha: float) -> "ModelParams":
        return ModelParams(delta=self.delta, eta_max=self.eta_max, alpha=alpha)


@dataclass(frozen=True)
class Constant:
    """Time-independent coupling mu(t) = level."""

    level: float = 1.0
    kind: str = "constant"

    def __post_init__(self):
        if not 0.0 <= self.level <= 1.0:
            raise InvalidParameter(f"constant envelope level must lie in [0, 1], got {self.level}")


@dataclass(frozen=True)
class SmoothedBox:
    """Smoothed box switching: mu ~ 1/2 at t0 and t0 + tau, maximum 1 at t0 + tau/2."""

    t0: float
    tau: float
    s: float
    kind: str = "smoothed-box"

    def __post_init__(self):
        for name in ("t0", "tau", "s"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise InvalidParameter(f"smoothed box {name} must be > 0, got {value}")

    @property
    def center(self) -> float:
        return self.t0 + 0.5 * self.tau


@dataclass(frozen=True)
class GaussianTransit:
    """Uniform transit through a Gaussian beam: mu(t) = exp(-(h - nu t)^2 / w_c^2)."""

    h: float
    nu: float
    w_c: float
    kind: str = "gaussian-transit"

    def __post_init__(self):
        if not math.isfinite(self.h):
            raise InvalidParameter(f"transit offset h must be finite, got {self.h}")
        if not math.isfinite(self.nu) or self.nu <= 0:
            raise InvalidParameter(f"transit speed nu must be > 0, got {self.nu}")
        if not math.isfinite(self.w_c) or self.w_c <= 0:
            raise InvalidParameter(f"beam waist w_c must be > 0, got {self.w_c}")

    @property
    def peak_time(self) -> float:
        return self.h / self.nu


@dataclass(frozen=True)
class Scaled:
    """Another envelope multiplied by a constant factor in [0, 1]."""

    base: "CouplingEnvelope"
    factor: float
    kind: str = "scaled"

    def __post_init__(self):
        if not 0.0 <= self.factor <= 1.0:
            raise InvalidParameter(f"envelope scale factor must lie in [0, 1], got {self.factor}")


CouplingEnvelope = Union[Constant, SmoothedBox, GaussianTransit, Scaled]


@dataclass(frozen=True)
class InteractionCoefficients:
    """Coefficients of the interaction V^alpha(t) in the bare ladder-operator basis."""

    c_quad_a: float
    c_quad_b: float
    u_minus: float
    u_plus: float


def _box_profile(env: SmoothedBox, t: float):
    # cosh/sinh ratio in terms of e = exp(-|s (t - center)|), with numerator and
    # denominator scaled by exp(-m) so that no exponent is positive.
    a = 0.5 * env.s * env.tau
    x = t - env.center
    z = abs(env.s * x)
    m = max(a - z, 0.0)
    c = math.exp(-m)
    e = math.exp(-z)
    big_e = math.exp(a - z - m) + math.exp(-a - z - m)
    q = c * (1.0 + e * e) + big_e
    ratio = c * (1.0 - e) ** 2 / q
    dratio_dz = c * (1.0 - e) * (2.0 * e * q + (1.0 - e) * (2.0 * c * e * e + big_e)) / (q * q)
    return ratio, dratio_dz * env.s * math.copysign(1.0, x)


def envelope_value(env: CouplingEnvelope, t: float) -> float:
    """Coupling envelope mu(t) in [0, 1]."""
    if isinstance(env, Constant):
        return float(env.level)
    if isinstance(env, SmoothedBox):
        ratio, _ = _box_profile(env, t)
        return 1.0 - math.tanh(0.5 * env.s * env.t0) * ratio
    if isinstance(env, GaussianTransit):
        return math.exp(-((env.h - env.nu * t) / env.w_c) ** 2)
    if isinstance(env, Scaled):
        return env.factor * envelope_value(env.base, t)
    raise InvalidParameter(f"unknown envelope type {type(env).__name__}")


def envelope_derivative(env: CouplingEnvelope, t: float) -> float:
    """Analytic time derivative of envelope_value."""
    if isinstance(env, Constant):
        return 0.0
    if isinstance(env, SmoothedBox):
        _, dratio = _box_profile(env, t)
        return -math.tanh(0.5 * env.s * env.t0) * dratio
    if isinstance(env, GaussianTransit):
        offset = env.h - env.nu * t
        return 2.0 * env.nu * offset / env.w_c ** 2 * math.exp(-(offset / env.w_c) ** 2)
    if isinstance(env, Scaled):
        return env.factor * envelope_derivative(env.base, t)
    raise InvalidParameter(f"unknown envelope type {type(env).__name__}")


def smoothed_box_floor(env: SmoothedBox) -> float:
    """Asymptotic value mu(+-inf) = 1 - tanh(s t0 / 2) of the smoothed box."""
    return 1.0 - math.tanh(0.5 * env.s * env.t0)


def smoothed_box_switch_time(s: float) -> float:
    """1%-99% rise time of a smoothed-box edge with steepness s."""
    if s <= 0:
        raise InvalidParameter(f"s must be > 0, got {s}")
    return 2.0 * math.log(99.0) / s


def jc_gauge(delta: float) -> float:
    """Jaynes-Cummings gauge alpha_g = 1/(1 + delta), where u_plus vanishes."""
    if not math.isfinite(delta) or delta <= 0:
        raise InvalidParameter(f"delta must be > 0, got {delta}")
    return 1.0 / (1.0 + delta)


def coupling_eta(params: ModelParams, env: CouplingEnvelope, t: float) -> float:
    """Instantaneous dimensionless coupling eta(t) = eta_max * mu(t)."""
    return params.eta_max * envelope_value(env, t)


def coefficients_at_eta(params: ModelParams, eta: float, alpha: float) -> InteractionCoefficients:
    """Interaction coefficients for a given instantaneous coupling eta and gauge alpha."""
    omega, delta = params.omega, params.delta
    return InteractionCoefficients(
        c_quad_a=eta ** 2 * omega * (1.0 - alpha) ** 2 / 4.0,
        c_quad_b=eta ** 2 * omega * delta * alpha ** 2 / 4.0,
        u_minus=eta * OMEGA_M * np.sqrt(delta) * ((1.0 - alpha) + delta * alpha) / 2.0,
        u_plus=eta * OMEGA_M * np.sqrt(delta) * ((1.0 - alpha) - delta * alpha) / 2.0,
    )


def interaction_coefficients(params: ModelParams, env: CouplingEnvelope, t: float) -> InteractionCoefficients:
    """Coefficients of V^alpha(t) with eta(t) = eta_max * mu(t)."""
    return coefficients_at_eta(params, coupling_eta(params, env, t), params.alpha)
