"""
Observables for GaugeSim
Extracts physical quantities from Gaussian states: mode populations, entropies,
mutual information, subsystem energies and the thermodynamic bound diagnostics.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict

import numpy as np
from scipy.special import xlogy

from backend_code.errors import InvalidParameter, InvalidState
from backend_code.gaussian_dynamics import GaussianState, symplectic_form
from backend_code.model import ModelParams

logger = logging.getLogger(__name__)

POPULATION_SLACK = 1e-9
SYMPLECTIC_SLACK = 1e-7
BOUND_SLACK = 1e-7

SUBSETS = {
    "cavity": [0, 1],
    "matter": [2, 3],
    "both": [0, 1, 2, 3],
}


@dataclass(frozen=True)
class EnergyReport:
    """Bare subsystem energies of a state and their changes against a reference state."""

    E_c: float
    E_m: float
    dE_c: float
    dE_m: float

    @property
    def work(self) -> float:
        return self.dE_c + self.dE_m

    def to_dict(self) -> Dict[str, float]:
        return {"E_c": self.E_c, "E_m": self.E_m, "dE_c": self.dE_c,
                "dE_m": self.dE_m, "work": self.work}


def _clip_population(n: float, label: str) -> float:
    if n < -POPULATION_SLACK:
        logger.warning("negative %s population %.3e clipped to zero", label, n)
    return max(n, 0.0)


def photon_number(state: GaussianState, mode: str) -> float:
    """<a^dag a> (cavity) or <b^dag b> (matter) from the mode's quadrature block."""
    mean, cov = state.mode_block(mode)
    n = 0.5 * (cov[0, 0] + cov[1, 1] + mean[0] ** 2 + mean[1] ** 2 - 1.0)
    return _clip_population(float(n), mode)


def renormalized_photon_number(state: GaussianState, params: ModelParams, alpha: float,
                               coupling_level: float) -> float:
    """Occupation of the cavity mode dressed by the diamagnetic term, frequency omega_alpha."""
    if coupling_level < 0:
        raise InvalidParameter(f"coupling_level must be >= 0, got {coupling_level}")
    eta = params.eta_max * coupling_level
    k = math.sqrt(1.0 + eta ** 2 * (1.0 - alpha) ** 2)
    mean, cov = state.mode_block("cavity")
    # one-mode squeeze x -> sqrt(k) x, p -> p / sqrt(k) with k = omega_alpha / omega
    n = 0.5 * (k * (cov[0, 0] + mean[0] ** 2) + (cov[1, 1] + mean[1] ** 2) / k - 1.0)
    return _clip_population(float(n), "renormalized cavity")


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Williamson spectrum of a 2n x 2n covariance matrix, ascending, one value per mode."""
    cov = np.asarray(cov, dtype=float)
    n_modes = cov.shape[0] // 2
    if cov.shape != (2 * n_modes, 2 * n_modes) or n_modes == 0:
        raise InvalidState(f"covariance must be square with even dimension, got {cov.shape}")
    spectrum = np.sort(np.abs(np.linalg.eigvals(1j * symplectic_form(n_modes) @ cov).real))
    return spectrum[::2]


def entropy_function(nu) -> np.ndarray:
    """Von Neumann entropy (nats) of a mode with symplectic eigenvalue nu >= 1/2."""
    nu = np.maximum(np.asarray(nu, dtype=float), 0.5)
    return xlogy(nu + 0.5, nu + 0.5) - xlogy(nu - 0.5, nu - 0.5)


def thermal_entropy(nbar: float) -> float:
    """(nbar + 1) ln(nbar + 1) - nbar ln(nbar) for a thermal mode."""
    if nbar < 0:
        raise InvalidParameter(f"nbar must be >= 0, got {nbar}")
    return float(xlogy(nbar + 1.0, nbar + 1.0) - xlogy(nbar, nbar))


def entropy(state: GaussianState, subset: str) -> float:
    """Von Neumann entropy (nats) of the cavity, the matter or the joint state."""
    if subset not in SUBSETS:
        raise InvalidParameter(f"subset must be one of {sorted(SUBSETS)}, got '{subset}'")
    idx = SUBSETS[subset]
    nus = symplectic_eigenvalues(state.cov[np.ix_(idx, idx)])
    if nus.min() < 0.5 - SYMPLECTIC_SLACK:
        raise InvalidState(f"symplectic eigenvalue {nus.min():.10f} below 1/2 for subset '{subset}'")
    return float(np.sum(entropy_function(nus)))


def mutual_information(state: GaussianState) -> float:
    """I = S(cavity) + S(matter) - S(both), clipped at zero."""
    info = entropy(state, "cavity") + entropy(state, "matter") - entropy(state, "both")
    if info < -POPULATION_SLACK:
        logger.warning("negative mutual information %.3e clipped to zero", info)
    return max(info, 0.0)


def subsystem_energies(state: GaussianState, params: ModelParams):
    """(E_c, E_m) with respect to the bare Hamiltonian H_0, zero-point included."""
    e_c = params.omega * (photon_number(state, "cavity") + 0.5)
    e_m = params.omega_m * (photon_number(state, "matter") + 0.5)
    return e_c, e_m


def energy_report(state: GaussianState, reference: GaussianState, params: ModelParams) -> EnergyReport:
    e_c, e_m = subsystem_energies(state, params)
    ref_c, ref_m = subsystem_energies(reference, params)
    return EnergyReport(E_c=e_c, E_m=e_m, dE_c=e_c - ref_c, dE_m=e_m - ref_m)


def _check_betas(beta_m: float, beta_c: float):
    if not beta_m > 0 or not beta_c > 0:
        raise InvalidParameter(f"inverse temperatures must be > 0, got beta_m={beta_m}, beta_c={beta_c}")


def thermo_bound_residual(report: EnergyReport, beta_m: float, beta_c: float, I_final: float) -> float:
    """beta_m dE_m + beta_c dE_c - I; non-negative for unitary runs from a Gibbs product."""
    _check_betas(beta_m, beta_c)
    return beta_m * report.dE_m + beta_c * report.dE_c - I_final


def zero_work_check(report: EnergyReport, beta_m: float, beta_c: float) -> float:
    """(beta_m - beta_c) dE_m; must be >= 0 wherever the net work vanishes."""
    _check_betas(beta_m, beta_c)
    return (beta_m - beta_c) * report.dE_m


def observable_row(t: float, state: GaussianState, reference: GaussianState, params: ModelParams,
                   mu: float) -> Dict[str, float]:
    """One row of the per-time table: t, alpha, mu, n_a, n_b, I, E_c, E_m, work."""
    report = energy_report(state, reference, params)
    return {
        "t": float(t),
        "alpha": params.alpha,
        "mu": float(mu),
        "n_a": photon_number(state, "cavity"),
        "n_b": photon_number(state, "matter"),
        "I": mutual_information(state),
        "E_c": report.E_c,
        "E_m": report.E_m,
        "work": report.work,
    }
