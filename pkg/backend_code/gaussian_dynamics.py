"""
Gaussian Dynamics for GaugeSim
Builds the quadratic generator of H^alpha(t) (and of the tilde family) in the
quadrature basis r = (x_c, p_c, x_m, p_m) and integrates the closed equations
for first and second moments of Gaussian states.

Conventions: a = (x_c + i p_c)/sqrt(2), b = (x_m + i p_m)/sqrt(2), H = r^T G r / 2,
cov_ij = <{r_i - <r_i>, r_j - <r_j>}>/2, so the vacuum covariance is I/2.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from backend_code.errors import (
    DynamicalInstabilityError,
    IntegrationError,
    InvalidParameter,
    InvalidState,
)
from backend_code.model import (
    CouplingEnvelope,
    ModelParams,
    coupling_eta,
    envelope_derivative,
    envelope_value,
)
from backend_code.transit import Variant, correction_at

logger = logging.getLogger(__name__)

N_MODES = 2
DEFAULT_TOL = 1e-9
POSITIVITY_SLACK = 1e-9
POSITIVITY_FAILURE = 1e-6


def symplectic_form(n_modes: int = N_MODES) -> np.ndarray:
    """Block-diagonal symplectic form with blocks [[0, 1], [-1, 0]]."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


OMEGA = symplectic_form()


@dataclass(frozen=True, eq=False)
class GaussianState:
    """First moments and covariance matrix of a two-mode Gaussian state."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cov = np.asarray(self.cov, dtype=float)
        if mean.shape != (2 * N_MODES,):
            raise InvalidState(f"Invalid 'mean' vector shape; expected=(4,), actual={mean.shape}.")
        if cov.shape != (2 * N_MODES, 2 * N_MODES):
            raise InvalidState(f"Invalid 'cov' matrix shape; expected=(4, 4), actual={cov.shape}.")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", 0.5 * (cov + cov.T))

    @classmethod
    def coherent(cls, alpha_c: complex = 0.0, alpha_m: complex = 0.0) -> "GaussianState":
        """Displaced vacuum with <a> = alpha_c and <b> = alpha_m."""
        a, b = complex(alpha_c), complex(alpha_m)
        mean = math.sqrt(2.0) * np.array([a.real, a.imag, b.real, b.imag])
        return cls(mean=mean, cov=0.5 * np.eye(2 * N_MODES))

    def heisenberg_min_eig(self) -> float:
        """Smallest eigenvalue of cov + i Omega / 2 (non-negative for physical states)."""
        return float(np.linalg.eigvalsh(self.cov + 0.5j * OMEGA).min())

    def purity_det(self) -> float:
        """det(2 cov); equals 1 for pure states."""
        return float(np.linalg.det(2.0 * self.cov))

    def mode_block(self, mode: str):
        """(mean, cov) restricted to the cavity or matter quadratures."""
        sl = _mode_slice(mode)
        return self.mean[sl], self.cov[sl, sl]

    def validate(self, slack: float = POSITIVITY_SLACK) -> None:
        if not np.all(np.isfinite(self.cov)) or not np.all(np.isfinite(self.mean)):
            raise InvalidState("Gaussian state contains non-finite entries.")
        min_eig = self.heisenberg_min_eig()
        if min_eig < -slack:
            raise InvalidState(
                f"The covariance matrix violates the uncertainty relation (min eigenvalue {min_eig:.3e})."
            )


def _mode_slice(mode: str) -> slice:
    if mode == "cavity":
        return slice(0, 2)
    if mode == "matter":
        return slice(2, 4)
    raise InvalidParameter(f"mode must be 'cavity' or 'matter', got '{mode}'")


@dataclass(frozen=True, eq=False)
class QuadraticGenerator:
    """Symmetric matrix G with H = r^T G r / 2 + offset."""

    G: np.ndarray
    offset: float = 0.0

    @property
    def drift(self) -> np.ndarray:
        return OMEGA @ self.G


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    """Moments on an increasing time grid, with the inputs echoed for provenance."""

    times: np.ndarray
    states: List[GaussianState]
    params: ModelParams
    envelope: CouplingEnvelope
    variant: Variant = field(default_factory=Variant.standard)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def final(self) -> GaussianState:
        return self.states[-1]

    def at(self, index: int) -> GaussianState:
        return self.states[index]

    def to_frame(self, reference: Optional[GaussianState] = None):
        """Per-time observable table; energies are measured against `reference` (default: the first state)."""
        import pandas as pd

        from backend_code.observables import observable_row

        reference = reference if reference is not None else self.states[0]
        rows = [
            observable_row(t, state, reference, self.params, envelope_value(self.envelope, t))
            for t, state in zip(self.times, self.states)
        ]
        return pd.DataFrame(rows)


def generator_matrix(params: ModelParams, eta: float, alpha: float, kappa: float = 0.0) -> np.ndarray:
    """G for an instantaneous coupling eta, gauge alpha and tilde correction kappa."""
    omega, delta = params.omega, params.delta
    lam = eta * math.sqrt(delta)
    G = np.diag([
        omega + eta ** 2 * omega * (1.0 - alpha) ** 2,
        omega,
        params.omega_m + eta ** 2 * omega * delta * alpha ** 2,
        params.omega_m,
    ])
    # i u_-(a b^dag - a^dag b) + i u_+(a^dag b^dag - a b) = (u_- + u_+) x_c p_m + (u_+ - u_-) p_c x_m
    G[0, 3] = G[3, 0] = lam * (1.0 - alpha)
    G[1, 2] = G[2, 1] = -lam * delta * alpha
    # kappa (a^dag + a)(b^dag + b) = 2 kappa x_c x_m
    G[0, 2] = G[2, 0] = 2.0 * kappa
    return G


def build_generator(params: ModelParams, env: CouplingEnvelope, t: float,
                    variant: Optional[Variant] = None) -> QuadraticGenerator:
    """Quadratic generator of H^alpha(t), plus the tilde correction when requested."""
    variant = variant or Variant.standard()
    eta = coupling_eta(params, env, t)
    kappa = 0.0
    if variant.is_tilde:
        kappa = correction_at(params, envelope_derivative(env, t), params.alpha,
                              variant.orientation_factor())
    return QuadraticGenerator(G=generator_matrix(params, eta, params.alpha, kappa))


def _check_grid(t_grid: Sequence[float]) -> np.ndarray:
    times = np.asarray(t_grid, dtype=float).reshape(-1)
    if times.size == 0:
        raise InvalidParameter("time grid is empty")
    if not np.all(np.isfinite(times)):
        raise InvalidParameter("time grid contains non-finite values")
    if times.size > 1 and np.any(np.diff(times) <= 0):
        raise InvalidParameter("time grid must be strictly increasing")
    return times


def default_max_step(params: ModelParams) -> float:
    """Resolve a bare cycle with at least 50 steps."""
    return 1.0 / (50.0 * max(params.omega, params.omega_m))


def evolve(state0: GaussianState, params: ModelParams, env: CouplingEnvelope,
           variant: Optional[Variant], t_grid: Sequence[float], tol: float = DEFAULT_TOL,
           max_step: Optional[float] = None) -> TrajectoryRecord:
    """Integrate d<r>/dt = Omega G <r> and d cov/dt = A cov + cov A^T with A = Omega G(t)."""
    variant = variant or Variant.standard()
    if not 1e-14 < tol < 1e-3:
        raise InvalidParameter(f"tol must lie in (1e-14, 1e-3), got {tol}")
    times = _check_grid(t_grid)
    state0.validate()
    max_step = max_step if max_step is not None else default_max_step(params)
    if max_step <= 0:
        raise InvalidParameter(f"max_step must be > 0, got {max_step}")

    if times.size == 1:
        return TrajectoryRecord(times=times, states=[state0], params=params, envelope=env, variant=variant)

    def rhs(t, y):
        A = OMEGA @ build_generator(params, env, t, variant).G
        m = y[:4]
        S = y[4:].reshape(4, 4)
        S = 0.5 * (S + S.T)
        AS = A @ S
        return np.concatenate([A @ m, (AS + AS.T).ravel()])

    y0 = np.concatenate([state0.mean, state0.cov.ravel()])
    sol = solve_ivp(rhs, (times[0], times[-1]), y0, method="DOP853", t_eval=times,
                    rtol=tol, atol=tol, max_step=max_step)
    if not sol.success:
        raise IntegrationError(f"moment integration failed: {sol.message}")
    logger.debug("evolve: %d grid points, %d rhs evaluations", times.size, sol.nfev)

    states = []
    for k in range(times.size):
        y = sol.y[:, k]
        cov = y[4:].reshape(4, 4)
        state = GaussianState(mean=y[:4], cov=cov)
        min_eig = state.heisenberg_min_eig()
        if min_eig < -POSITIVITY_FAILURE:
            raise IntegrationError(
                f"uncertainty relation violated at t={times[k]:.6g} (min eigenvalue {min_eig:.3e}); "
                "integrator breakdown"
            )
        if min_eig < -POSITIVITY_SLACK:
            logger.warning("positivity slack exceeded at t=%.6g: %.3e", times[k], min_eig)
        states.append(state)
    return TrajectoryRecord(times=times, states=states, params=params, envelope=env, variant=variant)


def vacuum_state() -> GaussianState:
    """Bare vacuum |0,0> of H_0."""
    return GaussianState(mean=np.zeros(4), cov=0.5 * np.eye(4))


def thermal_nbar(beta_omega: float) -> float:
    """Bose-Einstein occupation 1/(exp(beta omega) - 1)."""
    if not beta_omega > 0:
        raise InvalidParameter(f"beta*omega must be > 0, got {beta_omega}")
    return 1.0 / math.expm1(beta_omega) if beta_omega < 700 else 0.0


def thermal_product_state(beta_omega_c: float, beta_omega_m: float) -> GaussianState:
    """Product of Gibbs states of the bare cavity and matter oscillators."""
    nu_c = thermal_nbar(beta_omega_c) + 0.5
    nu_m = thermal_nbar(beta_omega_m) + 0.5
    return GaussianState(mean=np.zeros(4), cov=np.diag([nu_c, nu_c, nu_m, nu_m]))


def _normal_mode_decomposition(G: np.ndarray):
    # With M = G^(1/2) Omega G^(1/2), the eigenvalues of the Hermitian matrix iM are
    # +-(normal-mode frequencies) and the ground covariance is G^(-1/2) |iM| G^(-1/2) / 2.
    w, V = np.linalg.eigh(G)
    if w.min() <= 0:
        raise DynamicalInstabilityError(
            f"static generator is not positive definite (smallest eigenvalue {w.min():.3e}); "
            "the Hamiltonian has no ground state"
        )
    g_half = (V * np.sqrt(w)) @ V.T
    g_inv_half = (V / np.sqrt(w)) @ V.T
    lam, U = np.linalg.eigh(1j * (g_half @ OMEGA @ g_half))
    abs_im = ((U * np.abs(lam)) @ U.conj().T).real
    freqs = np.sort(lam[lam > 0])
    return freqs, g_inv_half, abs_im


def normal_mode_frequencies(generator: QuadraticGenerator) -> np.ndarray:
    """Normal-mode frequencies of a positive-definite static generator, ascending."""
    freqs, _, _ = _normal_mode_decomposition(generator.G)
    return freqs


def interacting_ground_state(params: ModelParams, coupling_level: float) -> GaussianState:
    """Ground state of the static Hamiltonian H^alpha with mu = coupling_level."""
    if not coupling_level >= 0:
        raise InvalidParameter(f"coupling_level must be >= 0, got {coupling_level}")
    G = generator_matrix(params, params.eta_max * coupling_level, params.alpha)
    freqs, g_inv_half, abs_im = _normal_mode_decomposition(G)
    if not np.all(np.isreal(freqs)) or freqs.size != N_MODES:
        raise DynamicalInstabilityError("normal-mode frequencies are not real")
    cov = 0.5 * g_inv_half @ abs_im @ g_inv_half
    return GaussianState(mean=np.zeros(4), cov=cov)
