"""
Ground State for GaugeSim
Closed-form quantities for the constant-coupling Hamiltonian H^alpha: derived
frequencies, ground-state mutual information and bare / renormalized photon numbers.

Every formula is written in terms of the single combination e^2/(m v) and then
evaluated with e^2/(m v) = eta^2 omega^2, so that e, m and v never enter separately.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from backend_code.gaussian_dynamics import GaussianState
from backend_code.model import ModelParams, jc_gauge

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DerivedFrequencies:
    """Frequencies that organise the ground state of H^alpha."""

    omega_alpha: float
    alpha_g: float
    omega_g: float
    omega_mg: float
    coupling_g: float


def _frequencies(coupling_sq: float, omega: float, omega_m: float, alpha: float) -> DerivedFrequencies:
    # coupling_sq is e^2/(m v)
    alpha_g = omega_m / (omega_m + omega)
    omega_alpha = math.sqrt(omega ** 2 + coupling_sq * (1.0 - alpha) ** 2)
    omega_g = math.sqrt(omega ** 2 + coupling_sq * (1.0 - alpha_g) ** 2)
    omega_mg = math.sqrt(omega_m ** 2 + coupling_sq * alpha_g ** 2)
    coupling_g = math.sqrt(coupling_sq * omega * omega_m) / (omega_m + omega)
    return DerivedFrequencies(omega_alpha=omega_alpha, alpha_g=alpha_g, omega_g=omega_g,
                              omega_mg=omega_mg, coupling_g=coupling_g)


def _mu(coupling_sq: float, omega: float, omega_m: float, alpha: float) -> float:
    f = _frequencies(coupling_sq, omega, omega_m, alpha)
    return math.sqrt(1.0 + (omega / f.omega_g) ** 2 * coupling_sq / (omega * omega_m)
                     * (alpha - f.alpha_g) ** 2)


def _occupation(coupling_sq: float, omega: float, omega_m: float, alpha: float, reference: float) -> float:
    # reference = omega gives the bare number, reference = omega_alpha the renormalized one
    f = _frequencies(coupling_sq, omega, omega_m, alpha)
    bracket = f.omega_g + coupling_sq * (alpha - f.alpha_g) ** 2 / f.omega_mg + reference ** 2 / f.omega_g
    return bracket / (4.0 * reference) - 0.5


def mutual_information_from_mu(mu: float) -> float:
    """(mu + 1) ln((mu + 1)/2) - (mu - 1) ln((mu - 1)/2), with the mu -> 1 limit."""
    if mu <= 1.0:
        return 0.0
    return (mu + 1.0) * math.log(0.5 * (mu + 1.0)) - (mu - 1.0) * math.log(0.5 * (mu - 1.0))


def symbolic_ground_state(e: float, m: float, v: float, omega: float, omega_m: float, alpha: float) -> dict:
    """Closed forms evaluated from explicit charge, mass and volume."""
    coupling_sq = e ** 2 / (m * v)
    f = _frequencies(coupling_sq, omega, omega_m, alpha)
    return {
        "omega_alpha": f.omega_alpha,
        "mu_alpha": _mu(coupling_sq, omega, omega_m, alpha),
        "I_G": mutual_information_from_mu(_mu(coupling_sq, omega, omega_m, alpha)),
        "n_a": _occupation(coupling_sq, omega, omega_m, alpha, omega),
        "n_c": _occupation(coupling_sq, omega, omega_m, alpha, f.omega_alpha),
    }


def _coupling_sq(params: ModelParams) -> float:
    return (params.eta_max * params.omega) ** 2


def derived_frequencies(params: ModelParams, alpha: float) -> DerivedFrequencies:
    return _frequencies(_coupling_sq(params), params.omega, params.omega_m, alpha)


def mu_alpha(params: ModelParams, alpha: float) -> float:
    """Argument of the ground-state mutual information; twice the local symplectic eigenvalue."""
    return _mu(_coupling_sq(params), params.omega, params.omega_m, alpha)


def ground_state_mutual_information(params: ModelParams, alpha: float) -> float:
    return mutual_information_from_mu(mu_alpha(params, alpha))


def ground_state_photon_number(params: ModelParams, alpha: float) -> float:
    """<a^dag a> in the ground state of H^alpha."""
    return max(_occupation(_coupling_sq(params), params.omega, params.omega_m, alpha, params.omega), 0.0)


def ground_state_renormalized_number(params: ModelParams, alpha: float) -> float:
    """<c^dag c> in the ground state of H^alpha; zero at the Jaynes-Cummings gauge."""
    omega_alpha = derived_frequencies(params, alpha).omega_alpha
    return max(_occupation(_coupling_sq(params), params.omega, params.omega_m, alpha, omega_alpha), 0.0)


def ground_state_covariance(params: ModelParams, alpha: float) -> GaussianState:
    """Ground state of H^alpha as a shear of the dressed-mode vacuum of H^{alpha_g}.

    At alpha_g both dressed modes share the squeeze ratio k = omega_g / omega = omega_mg,
    and the coupling is number conserving, so the (c, d) vacuum is the ground state.
    Changing gauge applies exp(i (alpha - alpha_g) lambda x_c x_m), i.e.
    p_c -> p_c + theta x_m and p_m -> p_m + theta x_c with theta = (alpha - alpha_g) eta sqrt(delta).
    """
    alpha_g = jc_gauge(params.delta)
    f = derived_frequencies(params, alpha)
    k_c = f.omega_g / params.omega
    k_m = f.omega_mg / params.omega_m
    cov_g = 0.5 * np.diag([1.0 / k_c, k_c, 1.0 / k_m, k_m])
    theta = (alpha - alpha_g) * params.eta_max * math.sqrt(params.delta)
    shear = np.eye(4)
    shear[1, 2] = theta
    shear[3, 0] = theta
    return GaussianState(mean=np.zeros(4), cov=shear @ cov_g @ shear.T)
