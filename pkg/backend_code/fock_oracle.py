"""
Fock Oracle for GaugeSim
Exact reference on a truncated two-mode Fock basis: Hamiltonian matrices of
H^alpha(t) and of the tilde family, Schroedinger propagation of pure states and of
spectral ensembles, exact ground states, partial-trace observables, a
truncation/step convergence gate and the reference-value fixtures file.
"""

import logging
import math
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.integrate import solve_ivp
from scipy.special import gammaln, xlogy

from backend_code.errors import ConvergenceError, InvalidParameter, InvalidState
from backend_code.model import (
    Constant,
    CouplingEnvelope,
    ModelParams,
    coefficients_at_eta,
    coupling_eta,
    envelope_derivative,
)
from backend_code.transit import Variant, correction_at

logger = logging.getLogger(__name__)

FIXTURE_VERSION = 1
DEFAULT_DIM = 30
DEFAULT_MAX_DIM = 60
DEFAULT_STEPS_PER_CYCLE = 200
DEFAULT_GATE = 1e-7
NORM_TOLERANCE = 1e-9
GROUND_STATE_MARGIN = 4


def annihilation_matrix(dim: int) -> sp.csr_matrix:
    """Truncated a with a|n> = sqrt(n)|n-1>."""
    return sp.diags(np.sqrt(np.arange(1, dim, dtype=float)), 1, shape=(dim, dim), format="csr")


@dataclass(frozen=True, eq=False)
class FockSystem:
    """Two truncated oscillators: the cavity (index a) and the matter mode (index b)."""

    dim_a: int
    dim_b: int
    a: sp.csr_matrix = field(init=False, repr=False)
    b: sp.csr_matrix = field(init=False, repr=False)

    def __post_init__(self):
        if self.dim_a < 2 or self.dim_b < 2:
            raise InvalidParameter(f"truncation dimensions must be >= 2, got ({self.dim_a}, {self.dim_b})")
        eye_a = sp.identity(self.dim_a, format="csr")
        eye_b = sp.identity(self.dim_b, format="csr")
        object.__setattr__(self, "a", sp.kron(annihilation_matrix(self.dim_a), eye_b, format="csr"))
        object.__setattr__(self, "b", sp.kron(eye_a, annihilation_matrix(self.dim_b), format="csr"))

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    @property
    def number_a(self) -> sp.csr_matrix:
        return (self.a.T @ self.a).tocsr()

    @property
    def number_b(self) -> sp.csr_matrix:
        return (self.b.T @ self.b).tocsr()

    def free_hamiltonian(self, params: ModelParams) -> sp.csr_matrix:
        eye = sp.identity(self.dim, format="csr")
        return (params.omega * (self.number_a + 0.5 * eye)
                + params.omega_m * (self.number_b + 0.5 * eye)).tocsr()

    @cached_property
    def _coupling_operators(self) -> Dict[str, sp.csr_matrix]:
        x_a = self.a + self.a.T
        x_b = self.b + self.b.T
        return {
            "x_a2": (x_a @ x_a).tocsr(),
            "x_b2": (x_b @ x_b).tocsr(),
            "exchange": (self.a @ self.b.T - self.a.T @ self.b).tocsr(),
            "pair": (self.a.T @ self.b.T - self.a @ self.b).tocsr(),
            "x_ab": (x_a @ x_b).tocsr(),
        }

    def operator_terms(self, params: ModelParams) -> Dict[str, sp.csr_matrix]:
        """H_0 and the operators multiplying each interaction coefficient."""
        return {"free": self.free_hamiltonian(params), **self._coupling_operators}

    def interior_indices(self) -> np.ndarray:
        """Basis indices with neither mode on its top level."""
        n, k = np.divmod(np.arange(self.dim), self.dim_b)
        return np.flatnonzero((n < self.dim_a - 1) & (k < self.dim_b - 1))

    def number_conserving_commutator(self, params: ModelParams) -> float:
        """max |[H_0, a b^dag - a^dag b]| over matrix elements away from the truncation boundary."""
        exchange = self.a @ self.b.T - self.a.T @ self.b
        h0 = self.free_hamiltonian(params)
        comm = (h0 @ exchange - exchange @ h0).toarray()
        idx = self.interior_indices()
        block = comm[np.ix_(idx, idx)]
        return float(np.abs(block).max()) if block.size else 0.0

    def reduced_matrix(self, psi: np.ndarray) -> np.ndarray:
        """psi reshaped to (dim_a, dim_b) amplitudes."""
        return np.asarray(psi).reshape(self.dim_a, self.dim_b)

    def renormalized_number(self, psi: np.ndarray, omega_ratio: float) -> float:
        """<c^dag c> with c = a (sqrt(k) + 1/sqrt(k))/2 + a^dag (sqrt(k) - 1/sqrt(k))/2, k = omega_ratio."""
        if omega_ratio <= 0:
            raise InvalidParameter(f"omega_ratio must be > 0, got {omega_ratio}")
        root = math.sqrt(omega_ratio)
        c = 0.5 * (root + 1.0 / root) * self.a + 0.5 * (root - 1.0 / root) * self.a.T
        c_psi = c @ psi
        return float(np.vdot(c_psi, c_psi).real)


@dataclass(frozen=True, eq=False)
class SpectralEnsemble:
    """Mixed state sum_k w_k |psi_k><psi_k| with orthonormal columns psi_k."""

    weights: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float)
        vectors = np.asarray(self.vectors, dtype=complex)
        if vectors.ndim != 2 or vectors.shape[1] != weights.size:
            raise InvalidState("ensemble needs one column vector per weight")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-9:
            raise InvalidState(f"ensemble weights must be non-negative and sum to 1, got sum {weights.sum()}")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "vectors", vectors)

    @classmethod
    def pure(cls, psi: np.ndarray) -> "SpectralEnsemble":
        psi = np.asarray(psi, dtype=complex).reshape(-1)
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidState(f"state vector is not normalized (norm {norm:.12f})")
        return cls(weights=np.ones(1), vectors=psi[:, None])

    @classmethod
    def from_density_matrix(cls, rho: np.ndarray, weight_cutoff: float = 1e-12) -> "SpectralEnsemble":
        rho = np.asarray(rho, dtype=complex)
        if abs(np.trace(rho).real - 1.0) > NORM_TOLERANCE:
            raise InvalidState("density matrix must have unit trace")
        w, v = scipy.linalg.eigh(0.5 * (rho + rho.conj().T))
        keep = w > weight_cutoff
        return cls(weights=w[keep] / w[keep].sum(), vectors=v[:, keep])

    @property
    def joint_entropy(self) -> float:
        """Constant under unitary evolution; Shannon entropy of the weights."""
        return float(-np.sum(xlogy(self.weights, self.weights)))


InitialState = Union[np.ndarray, SpectralEnsemble]


def vacuum_vector(sys: FockSystem) -> np.ndarray:
    psi = np.zeros(sys.dim, dtype=complex)
    psi[0] = 1.0
    return psi


def _coherent_amplitudes(dim: int, amplitude: complex) -> np.ndarray:
    n = np.arange(dim)
    if amplitude == 0:
        amps = (n == 0).astype(complex)
    else:
        log_mag = n * math.log(abs(amplitude)) - 0.5 * gammaln(n + 1) - 0.5 * abs(amplitude) ** 2
        amps = np.exp(log_mag) * np.exp(1j * n * np.angle(amplitude))
    return amps / np.linalg.norm(amps)


def coherent_vector(sys: FockSystem, alpha_c: complex, alpha_m: complex) -> np.ndarray:
    """Truncated product coherent state, renormalized on the finite basis."""
    return np.kron(_coherent_amplitudes(sys.dim_a, alpha_c), _coherent_amplitudes(sys.dim_b, alpha_m))


def thermal_ensemble(sys: FockSystem, beta_omega_c: float, beta_omega_m: float,
                     weight_cutoff: float = 1e-12) -> SpectralEnsemble:
    """Gibbs product state of H_0 as an ensemble of Fock product states."""
    if not beta_omega_c > 0 or not beta_omega_m > 0:
        raise InvalidParameter("beta*omega values must be > 0")
    p_a = np.exp(-beta_omega_c * np.arange(sys.dim_a)) * -math.expm1(-beta_omega_c)
    p_b = np.exp(-beta_omega_m * np.arange(sys.dim_b)) * -math.expm1(-beta_omega_m)
    weights = np.kron(p_a, p_b)
    lost = 1.0 - weights.sum()
    if lost > 1e-8:
        logger.warning("thermal weight %.2e lies above the truncation", lost)
    keep = np.flatnonzero(weights > weight_cutoff)
    vectors = np.zeros((sys.dim, keep.size), dtype=complex)
    vectors[keep, np.arange(keep.size)] = 1.0
    logger.debug("thermal ensemble: %d of %d basis states kept", keep.size, sys.dim)
    return SpectralEnsemble(weights=weights[keep] / weights[keep].sum(), vectors=vectors)


def _term_weights(params: ModelParams, eta: float, alpha: float, kappa: float = 0.0) -> Dict[str, complex]:
    coeffs = coefficients_at_eta(params, eta, alpha)
    return {
        "free": 1.0,
        "x_a2": coeffs.c_quad_a,
        "x_b2": coeffs.c_quad_b,
        "exchange": 1j * coeffs.u_minus,
        "pair": 1j * coeffs.u_plus,
        "x_ab": kappa,
    }


def _sparse_hamiltonian(sys: FockSystem, params: ModelParams, eta: float, alpha: float,
                        kappa: float = 0.0) -> sp.csr_matrix:
    terms = sys.operator_terms(params)
    weights = _term_weights(params, eta, alpha, kappa)
    return sp.csr_matrix(sum(weights[name] * terms[name] for name in terms))


def _kappa(params: ModelParams, env: CouplingEnvelope, t: float, variant: Variant) -> float:
    if not variant.is_tilde:
        return 0.0
    return correction_at(params, envelope_derivative(env, t), params.alpha, variant.orientation_factor())


def build_hamiltonian(sys: FockSystem, params: ModelParams, env: CouplingEnvelope, t: float,
                      variant: Optional[Variant] = None) -> np.ndarray:
    """Dense Hermitian matrix of H^alpha(t) (or the tilde variant) on the truncated basis."""
    variant = variant or Variant.standard()
    eta = coupling_eta(params, env, t)
    return _sparse_hamiltonian(sys, params, eta, params.alpha, _kappa(params, env, t, variant)).toarray()


@dataclass(frozen=True, eq=False)
class OracleSeries:
    """Expectation values of an exact propagation on its output grid."""

    times: np.ndarray
    n_a: np.ndarray
    n_b: np.ndarray
    mutual_information: np.ndarray
    mean_a: np.ndarray
    mean_b: np.ndarray
    norm_drift: float
    dims: Tuple[int, int] = (0, 0)
    steps_per_cycle: int = 0

    def final(self) -> Dict[str, float]:
        return {"n_a": float(self.n_a[-1]), "n_b": float(self.n_b[-1]),
                "I": float(self.mutual_information[-1])}


def _von_neumann(rho: np.ndarray) -> float:
    p = np.clip(np.linalg.eigvalsh(rho), 0.0, None)
    return float(-np.sum(xlogy(p, p)))


def _ensemble_observables(sys: FockSystem, weights: np.ndarray, vectors: np.ndarray, joint_entropy: float):
    n_a_op, n_b_op = sys.number_a, sys.number_b
    n_a = float(np.sum(weights * np.einsum("ik,ik->k", vectors.conj(), n_a_op @ vectors).real))
    n_b = float(np.sum(weights * np.einsum("ik,ik->k", vectors.conj(), n_b_op @ vectors).real))
    mean_a = complex(np.sum(weights * np.einsum("ik,ik->k", vectors.conj(), sys.a @ vectors)))
    mean_b = complex(np.sum(weights * np.einsum("ik,ik->k", vectors.conj(), sys.b @ vectors)))
    amps = vectors.T.reshape(-1, sys.dim_a, sys.dim_b)
    rho_a = np.einsum("k,kij,klj->il", weights, amps, amps.conj())
    rho_b = np.einsum("k,kji,kjl->il", weights, amps, amps.conj())
    info = _von_neumann(rho_a) + _von_neumann(rho_b) - joint_entropy
    return n_a, n_b, max(info, 0.0), mean_a, mean_b


def propagate(sys: FockSystem, initial: InitialState, params: ModelParams, env: CouplingEnvelope,
              variant: Optional[Variant], t_grid: Sequence[float],
              steps_per_cycle: int = DEFAULT_STEPS_PER_CYCLE, tol: float = 1e-11) -> OracleSeries:
    """Integrate i d psi/dt = H(t) psi for every member of the initial ensemble."""
    variant = variant or Variant.standard()
    if steps_per_cycle < 1:
        raise InvalidParameter(f"steps_per_cycle must be >= 1, got {steps_per_cycle}")
    times = np.asarray(t_grid, dtype=float).reshape(-1)
    if times.size == 0 or (times.size > 1 and np.any(np.diff(times) <= 0)):
        raise InvalidParameter("time grid must be non-empty and strictly increasing")
    if isinstance(initial, np.ndarray) and initial.ndim == 2:
        initial = SpectralEnsemble.from_density_matrix(initial)
    ensemble = initial if isinstance(initial, SpectralEnsemble) else SpectralEnsemble.pure(initial)
    if ensemble.vectors.shape[0] != sys.dim:
        raise InvalidState(f"initial state has dimension {ensemble.vectors.shape[0]}, expected {sys.dim}")

    n_members = ensemble.weights.size
    max_step = 2.0 * math.pi / (steps_per_cycle * max(params.omega, params.omega_m))

    terms = sys.operator_terms(params)

    def rhs(t, y):
        weights = _term_weights(params, coupling_eta(params, env, t), params.alpha,
                                _kappa(params, env, t, variant))
        psi = y.reshape(sys.dim, n_members)
        h_psi = sum(weights[name] * (terms[name] @ psi) for name in terms if weights[name] != 0.0)
        return (-1j * h_psi).ravel()

    y0 = ensemble.vectors.ravel()
    if times.size > 1:
        sol = solve_ivp(rhs, (times[0], times[-1]), y0, method="DOP853", t_eval=times,
                        rtol=tol, atol=tol, max_step=max_step)
        if not sol.success:
            raise ConvergenceError(f"Fock propagation failed: {sol.message}")
        ys = sol.y
        logger.debug("propagate dims=%s members=%d nfev=%d", (sys.dim_a, sys.dim_b), n_members, sol.nfev)
    else:
        ys = y0[:, None]

    rows = []
    drift = 0.0
    for k in range(times.size):
        vectors = ys[:, k].reshape(sys.dim, n_members)
        norms = np.linalg.norm(vectors, axis=0)
        drift = max(drift, float(np.max(np.abs(norms - 1.0))))
        rows.append(_ensemble_observables(sys, ensemble.weights, vectors, ensemble.joint_entropy))
    if drift > NORM_TOLERANCE:
        logger.warning("norm drift %.2e exceeds %.0e", drift, NORM_TOLERANCE)
    cols = list(zip(*rows))
    return OracleSeries(times=times, n_a=np.array(cols[0]), n_b=np.array(cols[1]),
                        mutual_information=np.array(cols[2]), mean_a=np.array(cols[3]),
                        mean_b=np.array(cols[4]), norm_drift=drift,
                        dims=(sys.dim_a, sys.dim_b), steps_per_cycle=steps_per_cycle)


def _lowest_eigenpair(sys: FockSystem, params: ModelParams, alpha: float) -> Tuple[np.ndarray, float]:
    h = build_hamiltonian(sys, params.with_alpha(alpha), Constant(1.0), 0.0)
    energies, vectors = scipy.linalg.eigh(h, subset_by_index=[0, 0])
    return vectors[:, 0], float(energies[0])


def _populations(sys: FockSystem, psi: np.ndarray) -> Tuple[float, float]:
    return float(np.vdot(psi, sys.number_a @ psi).real), float(np.vdot(psi, sys.number_b @ psi).real)


def exact_ground_state(sys: FockSystem, params: ModelParams, alpha: float,
                       gate: Optional[float] = DEFAULT_GATE,
                       margin: int = GROUND_STATE_MARGIN) -> Tuple[np.ndarray, float]:
    """Lowest eigenpair of the constant-coupling H^alpha (mu = 1).

    The energy and both mode populations are recomputed with `margin` more levels per
    mode; a change above `gate` raises ConvergenceError. gate=None skips the check.
    """
    psi, energy = _lowest_eigenpair(sys, params, alpha)
    if gate is None:
        return psi, energy
    larger = FockSystem(sys.dim_a + margin, sys.dim_b + margin)
    psi_l, energy_l = _lowest_eigenpair(larger, params, alpha)
    drift = max(abs(energy_l - energy),
                *(abs(x - y) for x, y in zip(_populations(larger, psi_l), _populations(sys, psi))))
    logger.debug("ground state at dims %s: drift %.3e against +%d levels", (sys.dim_a, sys.dim_b), drift, margin)
    if drift > gate:
        raise ConvergenceError(
            f"ground state not converged at dims ({sys.dim_a}, {sys.dim_b}): drift {drift:.3e} > gate {gate:.0e}",
            drift=drift,
        )
    return psi, energy


def ground_state_observables(sys: FockSystem, params: ModelParams, alpha: float,
                             gate: Optional[float] = DEFAULT_GATE) -> Dict[str, float]:
    """n_a, n_c and the mutual information of the exact ground state."""
    psi, energy = exact_ground_state(sys, params, alpha, gate=gate)
    eta = params.eta_max
    omega_ratio = math.sqrt(1.0 + eta ** 2 * (1.0 - alpha) ** 2)
    rho_a = sys.reduced_matrix(psi) @ sys.reduced_matrix(psi).conj().T
    return {
        "energy": energy,
        "n_a": float(np.vdot(psi, sys.number_a @ psi).real),
        "n_c": sys.renormalized_number(psi, omega_ratio),
        "I": 2.0 * _von_neumann(rho_a),
    }


Runner = Callable[[int, int, int], Dict[str, np.ndarray]]


@dataclass(frozen=True)
class ConvergenceReport:
    """Result of the refinement gate: the finest run and its drift against the previous level."""

    values: Dict[str, np.ndarray]
    drift: float
    dims: Tuple[int, int]
    steps_per_cycle: int


def converge(run: Runner, dims: Tuple[int, int] = (DEFAULT_DIM, DEFAULT_DIM),
             steps_per_cycle: int = DEFAULT_STEPS_PER_CYCLE, max_dim: int = DEFAULT_MAX_DIM,
             gate: float = DEFAULT_GATE) -> ConvergenceReport:
    """Double dims and steps_per_cycle until successive runs agree within `gate`."""
    dim_a, dim_b = dims
    current = run(dim_a, dim_b, steps_per_cycle)
    drift = float("nan")
    while True:
        next_a, next_b = min(2 * dim_a, max_dim), min(2 * dim_b, max_dim)
        if (next_a, next_b) == (dim_a, dim_b):
            raise ConvergenceError(
                f"convergence not reached at dims ({dim_a}, {dim_b}) (max_dim {max_dim}); last drift {drift:.3e}",
                drift=drift,
            )
        refined = run(next_a, next_b, 2 * steps_per_cycle)
        drift = max(float(np.max(np.abs(np.asarray(refined[key]) - np.asarray(current[key]))))
                    for key in refined)
        logger.info("oracle gate: dims %s -> %s, drift %.3e", (dim_a, dim_b), (next_a, next_b), drift)
        dim_a, dim_b, steps_per_cycle, current = next_a, next_b, 2 * steps_per_cycle, refined
        if drift <= gate:
            return ConvergenceReport(values=refined, drift=drift, dims=(dim_a, dim_b),
                                     steps_per_cycle=steps_per_cycle)


def write_fixtures(path: Union[str, Path], values: Dict[str, Dict[str, float]]) -> Path:
    """Write converged reference values as a versioned TOML file, one table per case."""
    path = Path(path)
    lines = ["# GaugeSim Fock-oracle reference values", f"fixture_version = {FIXTURE_VERSION}", ""]
    for case in sorted(values):
        lines.append(f'[case."{case}"]')
        for key in sorted(values[case]):
            lines.append(f"{key} = {float(values[case][key])!r}")
        lines.append("")
    path.write_text("\n".join(lines), encoding="utf-8")
    logger.info("wrote %d fixture cases to %s", len(values), path)
    return path


def read_fixtures(path: Union[str, Path]) -> Dict[str, Dict[str, float]]:
    try:
        with open(path, "rb") as handle:
            data = tomllib.load(handle)
    except FileNotFoundError as exc:
        raise InvalidParameter(f"fixtures file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise InvalidParameter(f"fixtures file {path} is not valid TOML: {exc}") from exc
    if data.get("fixture_version") != FIXTURE_VERSION:
        raise InvalidParameter(f"unsupported fixture_version {data.get('fixture_version')!r}")
    return data.get("case", {})
