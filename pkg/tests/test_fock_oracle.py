"""
Unit tests for backend_code.fock_oracle, including cross-checks against the
moment equations.
"""

import math

import numpy as np
import pytest

from backend_code.errors import ConvergenceError, InvalidParameter, InvalidState
from backend_code.fock_oracle import (
    FockSystem,
    SpectralEnsemble,
    build_hamiltonian,
    coherent_vector,
    converge,
    exact_ground_state,
    ground_state_observables,
    propagate,
    read_fixtures,
    thermal_ensemble,
    vacuum_vector,
    write_fixtures,
)
from backend_code.gaussian_dynamics import (
    GaussianState,
    QuadraticGenerator,
    build_generator,
    evolve,
    generator_matrix,
    normal_mode_frequencies,
    thermal_product_state,
    vacuum_state,
)
from backend_code.ground_state import (
    ground_state_mutual_information,
    ground_state_photon_number,
    ground_state_renormalized_number,
)
from backend_code.model import Constant, ModelParams, SmoothedBox, jc_gauge
from backend_code.observables import mutual_information, photon_number
from backend_code.transit import Variant


def quadrature_hamiltonian(sys, G):
    """r^T G r / 2 assembled from truncated quadrature matrices."""
    a, b = sys.a.toarray(), sys.b.toarray()
    r = [
        (a + a.T) / math.sqrt(2),
        -1j * (a - a.T) / math.sqrt(2),
        (b + b.T) / math.sqrt(2),
        -1j * (b - b.T) / math.sqrt(2),
    ]
    return 0.5 * sum(G[i, j] * (r[i] @ r[j]) for i in range(4) for j in range(4))


def gaussian_finals(record):
    final = record.final
    return {"n_a": photon_number(final, "cavity"), "n_b": photon_number(final, "matter"),
            "I": mutual_information(final)}


class TestFockSystem:
    def test_rejects_tiny_truncation(self):
        with pytest.raises(InvalidParameter, match="truncation"):
            FockSystem(1, 5)

    def test_free_spectrum(self):
        sys = FockSystem(4, 3)
        params = ModelParams(delta=0.5, eta_max=0.0)
        h = build_hamiltonian(sys, params, Constant(1.0), 0.0)
        n, k = np.divmod(np.arange(sys.dim), 3)
        assert np.allclose(h, np.diag(0.5 * (n + 0.5) + (k + 0.5)))

    def test_hermitian(self):
        sys = FockSystem(6, 5)
        params = ModelParams(delta=0.5, eta_max=1.0, alpha=0.3)
        h = build_hamiltonian(sys, params, SmoothedBox(5.0, 10.0, 2.3), 4.0, Variant.tilde(1.0))
        assert np.allclose(h, h.conj().T, atol=1e-14)

    def test_exchange_commutes_with_free_part_at_resonance(self):
        sys = FockSystem(8, 8)
        assert sys.number_conserving_commutator(ModelParams(delta=1.0, eta_max=1.0)) < 1e-12
        assert sys.number_conserving_commutator(ModelParams(delta=0.5, eta_max=1.0)) > 0.1

    def test_renormalized_number_reduces_to_bare_number(self):
        sys = FockSystem(12, 4)
        psi = coherent_vector(sys, 0.6, 0.0)
        assert sys.renormalized_number(psi, 1.0) == pytest.approx(float(np.vdot(psi, sys.number_a @ psi).real))

    def test_coherent_vector(self):
        sys = FockSystem(30, 4)
        psi = coherent_vector(sys, 0.3 + 0.4j, 0.0)
        assert np.linalg.norm(psi) == pytest.approx(1.0)
        assert np.vdot(psi, sys.number_a @ psi).real == pytest.approx(0.25, abs=1e-12)
        assert np.vdot(psi, sys.a @ psi) == pytest.approx(0.3 + 0.4j, abs=1e-12)


class TestQuadratureConsistency:
    @pytest.mark.parametrize("alpha", [0.0, 0.3, 1.0])
    def test_matches_generator_away_from_truncation_edge(self, alpha):
        sys = FockSystem(7, 6)
        params = ModelParams(delta=0.5, eta_max=1.0, alpha=alpha)
        env = SmoothedBox(5.0, 10.0, 2.3)
        variant = Variant.tilde(1.0)
        t = 4.3
        h = build_hamiltonian(sys, params, env, t, variant)
        h_quad = quadrature_hamiltonian(sys, build_generator(params, env, t, variant).G)
        idx = sys.interior_indices()
        assert np.allclose(h[np.ix_(idx, idx)], h_quad[np.ix_(idx, idx)], atol=1e-12)

    def test_counter_rotating_terms_vanish_at_jc_gauge(self):
        sys = FockSystem(6, 6)
        params = ModelParams(delta=0.5, eta_max=1.0, alpha=jc_gauge(0.5))
        h = build_hamiltonian(sys, params, Constant(1.0), 0.0)
        # <1,1| H |0,0> is fed only by the pair term
        assert abs(h[1 * 6 + 1, 0]) < 1e-15


class TestSpectralEnsemble:
    def test_pure_requires_normalization(self):
        with pytest.raises(InvalidState, match="normalized"):
            SpectralEnsemble.pure(np.array([1.0, 1.0]))

    def test_weights_must_sum_to_one(self):
        with pytest.raises(InvalidState, match="sum to 1"):
            SpectralEnsemble(weights=np.array([0.5, 0.2]), vectors=np.eye(2))

    def test_from_density_matrix(self):
        ensemble = SpectralEnsemble.from_density_matrix(np.diag([0.5, 0.5, 0.0]))
        assert ensemble.weights.size == 2
        assert ensemble.joint_entropy == pytest.approx(math.log(2.0))

    def test_thermal_weights(self):
        sys = FockSystem(40, 40)
        ensemble = thermal_ensemble(sys, math.log(2.0), 5.0)
        populations = np.einsum("ik,ik->k", ensemble.vectors.conj(), sys.number_a @ ensemble.vectors).real
        assert np.sum(ensemble.weights * populations) == pytest.approx(1.0, abs=1e-6)


class TestExactGroundState:
    @pytest.mark.parametrize("alpha", [0.0, jc_gauge(0.5), 1.0])
    def test_matches_closed_forms(self, alpha):
        params = ModelParams(delta=0.5, eta_max=0.5)
        obs = ground_state_observables(FockSystem(20, 20), params, alpha)
        assert obs["n_a"] == pytest.approx(ground_state_photon_number(params, alpha), abs=1e-8)
        assert obs["n_c"] == pytest.approx(ground_state_renormalized_number(params, alpha), abs=1e-8)
        assert obs["I"] == pytest.approx(ground_state_mutual_information(params, alpha), abs=1e-7)

    def test_energy_is_gauge_invariant(self):
        params = ModelParams(delta=0.5, eta_max=0.5)
        freqs = normal_mode_frequencies(QuadraticGenerator(G=generator_matrix(params, 0.5, 0.0)))
        sys = FockSystem(20, 20)
        for alpha in (0.0, 0.5, 1.0):
            _, energy = exact_ground_state(sys, params, alpha)
            assert energy == pytest.approx(0.5 * freqs.sum(), abs=1e-8)

    def test_small_truncation_is_rejected(self):
        params = ModelParams(delta=0.5, eta_max=1.0)
        with pytest.raises(ConvergenceError, match="not converged") as excinfo:
            exact_ground_state(FockSystem(4, 4), params, 0.0)
        assert excinfo.value.drift > 1e-7
        with pytest.raises(ConvergenceError):
            ground_state_observables(FockSystem(4, 4), params, 0.0)

    def test_gate_can_be_skipped(self):
        params = ModelParams(delta=0.5, eta_max=1.0)
        psi, _ = exact_ground_state(FockSystem(4, 4), params, 0.0, gate=None)
        assert np.linalg.norm(psi) == pytest.approx(1.0)


class TestPropagation:
    def test_vacuum_matches_moment_equations(self):
        params = ModelParams(delta=0.5, eta_max=0.5, alpha=0.0)
        env = SmoothedBox(5.0, 10.0, 2.3)
        grid = np.linspace(0.0, 20.0, 21)
        sys = FockSystem(16, 16)
        series = propagate(sys, vacuum_vector(sys), params, env, None, grid)
        record = evolve(vacuum_state(), params, env, None, grid, tol=1e-11)
        assert series.final() == pytest.approx(gaussian_finals(record), abs=1e-6)
        assert series.norm_drift < 1e-7
        assert series.dims == (16, 16)

    def test_coherent_means_follow_moment_equations(self):
        params = ModelParams(delta=0.5, eta_max=0.5, alpha=jc_gauge(0.5))
        env = SmoothedBox(2.0, 4.0, 2.3)
        grid = np.linspace(0.0, 8.0, 9)
        sys = FockSystem(20, 14)
        series = propagate(sys, coherent_vector(sys, 0.5, 0.0), params, env, None, grid)
        record = evolve(GaussianState.coherent(0.5, 0.0), params, env, None, grid, tol=1e-11)
        mean = record.final.mean
        assert series.mean_a[-1] == pytest.approx((mean[0] + 1j * mean[1]) / math.sqrt(2), abs=1e-6)
        assert series.mean_b[-1] == pytest.approx((mean[2] + 1j * mean[3]) / math.sqrt(2), abs=1e-6)

    @pytest.mark.slow
    def test_thermal_ensemble_matches_moment_equations(self):
        params = ModelParams(delta=0.5, eta_max=0.5, alpha=1.0)
        env = SmoothedBox(2.0, 4.0, 2.3)
        grid = np.linspace(0.0, 8.0, 5)
        sys = FockSystem(14, 14)
        series = propagate(sys, thermal_ensemble(sys, 3.0, 3.0), params, env, None, grid)
        record = evolve(thermal_product_state(3.0, 3.0), params, env, None, grid, tol=1e-11)
        assert series.final() == pytest.approx(gaussian_finals(record), abs=1e-5)

    def test_single_point_grid(self):
        sys = FockSystem(4, 4)
        series = propagate(sys, vacuum_vector(sys), ModelParams(delta=1.0, eta_max=1.0),
                           Constant(1.0), None, [0.0])
        assert series.final() == {"n_a": 0.0, "n_b": 0.0, "I": 0.0}

    def test_rejects_wrong_dimension(self):
        sys = FockSystem(4, 4)
        with pytest.raises(InvalidState, match="dimension"):
            propagate(sys, vacuum_vector(FockSystem(3, 3)), ModelParams(delta=1.0, eta_max=1.0),
                      Constant(1.0), None, [0.0, 1.0])

    def test_rejects_bad_grid(self):
        sys = FockSystem(4, 4)
        with pytest.raises(InvalidParameter, match="grid"):
            propagate(sys, vacuum_vector(sys), ModelParams(delta=1.0, eta_max=1.0),
                      Constant(1.0), None, [1.0, 0.5])


class TestConvergenceGate:
    def test_accepts_converged_runner(self):
        report = converge(lambda da, db, spc: {"x": np.array([math.exp(-2 * da)])}, dims=(10, 10),
                          steps_per_cycle=50, max_dim=40, gate=1e-7)
        assert report.dims == (20, 20)
        assert report.steps_per_cycle == 100
        assert report.drift < 1e-7

    def test_stops_at_max_dim(self):
        with pytest.raises(ConvergenceError, match="convergence not reached") as excinfo:
            converge(lambda da, db, spc: {"x": np.array([1.0 / da])}, dims=(4, 4), max_dim=8)
        assert excinfo.value.drift == pytest.approx(0.125)

    def test_tiny_truncation_does_not_converge(self):
        params = ModelParams(delta=0.5, eta_max=1.0)
        env = SmoothedBox(2.0, 4.0, 2.3)
        grid = np.linspace(0.0, 8.0, 5)

        def run(dim_a, dim_b, spc):
            sys = FockSystem(dim_a, dim_b)
            series = propagate(sys, vacuum_vector(sys), params, env, None, grid, steps_per_cycle=spc)
            return {"n_a": series.n_a}

        with pytest.raises(ConvergenceError):
            converge(run, dims=(2, 2), steps_per_cycle=20, max_dim=4)


class TestFixtures:
    def test_round_trip(self, tmp_path):
        values = {"fig4-alpha-0": {"n_a_final": 0.123456789012345, "drift": 3.2e-9},
                  "fig4-alpha-1": {"n_a_final": 1e-300, "drift": float("nan")}}
        path = write_fixtures(tmp_path / "oracle.toml", values)
        loaded = read_fixtures(path)
        assert loaded["fig4-alpha-0"] == values["fig4-alpha-0"]
        assert loaded["fig4-alpha-1"]["n_a_final"] == 1e-300
        assert math.isnan(loaded["fig4-alpha-1"]["drift"])

    def test_rejects_unknown_version(self, tmp_path):
        path = tmp_path / "old.toml"
        path.write_text("fixture_version = 99\n", encoding="utf-8")
        with pytest.raises(InvalidParameter, match="fixture_version"):
            read_fixtures(path)
