"""
Unit tests for backend_code.ground_state.
"""

import math

import numpy as np
import pytest

from backend_code.gaussian_dynamics import interacting_ground_state
from backend_code.model import ModelParams, jc_gauge
from backend_code.ground_state import (
    derived_frequencies,
    ground_state_covariance,
    ground_state_mutual_information,
    ground_state_photon_number,
    ground_state_renormalized_number,
    mu_alpha,
    mutual_information_from_mu,
    symbolic_ground_state,
)
from backend_code.observables import mutual_information, photon_number, renormalized_photon_number

DELTAS = [0.5, 1.0, 2.0]


class TestDerivedFrequencies:
    def test_values(self):
        params = ModelParams(delta=0.5, eta_max=1.0)
        f = derived_frequencies(params, 0.0)
        assert f.alpha_g == pytest.approx(2 / 3)
        assert f.omega_alpha == pytest.approx(0.5 * math.sqrt(2.0))
        assert f.omega_g == pytest.approx(0.5 * math.sqrt(1.0 + 1 / 9))
        assert f.omega_mg == pytest.approx(math.sqrt(1.0 + 1 / 9))

    @pytest.mark.parametrize("delta", DELTAS)
    def test_coupling_g(self, delta):
        f = derived_frequencies(ModelParams(delta=delta, eta_max=0.8), 0.3)
        assert f.coupling_g == pytest.approx(0.8 * delta ** 1.5 / (1.0 + delta))

    @pytest.mark.parametrize("delta", DELTAS)
    def test_dressed_squeeze_ratios_coincide(self, delta):
        f = derived_frequencies(ModelParams(delta=delta, eta_max=1.3), 0.0)
        assert f.omega_g / delta == pytest.approx(f.omega_mg, rel=1e-14)


class TestMutualInformation:
    def test_limit_at_one(self):
        assert mutual_information_from_mu(1.0) == 0.0
        assert mutual_information_from_mu(1.0 + 1e-12) == pytest.approx(0.0, abs=1e-10)

    @pytest.mark.parametrize("delta", DELTAS)
    def test_vanishes_at_jc_gauge(self, delta):
        params = ModelParams(delta=delta, eta_max=1.0)
        assert ground_state_mutual_information(params, jc_gauge(delta)) == 0.0
        assert mu_alpha(params, jc_gauge(delta)) == 1.0

    @pytest.mark.parametrize("delta", DELTAS)
    def test_symmetric_about_jc_gauge(self, delta):
        params = ModelParams(delta=delta, eta_max=1.0)
        alpha_g = jc_gauge(delta)
        for x in np.linspace(0.05, 0.6, 12):
            left = ground_state_mutual_information(params, alpha_g - x)
            right = ground_state_mutual_information(params, alpha_g + x)
            assert abs(left - right) < 1e-12

    @pytest.mark.parametrize("delta", DELTAS)
    def test_minimum_over_gauges(self, delta):
        params = ModelParams(delta=delta, eta_max=1.0)
        alphas = np.linspace(0.0, 1.0, 101)
        values = [ground_state_mutual_information(params, a) for a in alphas]
        assert min(values) >= 0.0
        assert values[0] > 0.0 and values[-1] > 0.0

    def test_coulomb_and_multipolar_agree_at_resonance(self):
        params = ModelParams(delta=1.0, eta_max=1.0)
        assert ground_state_mutual_information(params, 0.0) == pytest.approx(
            ground_state_mutual_information(params, 1.0), rel=1e-14)

    def test_increases_with_coupling(self):
        values = [ground_state_mutual_information(ModelParams(delta=0.5, eta_max=eta), 0.0)
                  for eta in (0.1, 0.5, 1.0)]
        assert values == sorted(values)


class TestPhotonNumbers:
    @pytest.mark.parametrize("delta", DELTAS)
    def test_renormalized_number_vanishes_at_jc_gauge(self, delta):
        params = ModelParams(delta=delta, eta_max=1.0)
        assert ground_state_renormalized_number(params, jc_gauge(delta)) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("delta", DELTAS)
    def test_bare_and_renormalized_agree_in_multipolar_gauge(self, delta):
        params = ModelParams(delta=delta, eta_max=1.0)
        assert ground_state_renormalized_number(params, 1.0) == pytest.approx(
            ground_state_photon_number(params, 1.0), rel=1e-14)

    def test_uncoupled_ground_state_is_empty(self):
        params = ModelParams(delta=0.5, eta_max=0.0)
        for alpha in (0.0, 0.5, 1.0):
            assert ground_state_photon_number(params, alpha) == pytest.approx(0.0, abs=1e-15)
            assert ground_state_renormalized_number(params, alpha) == pytest.approx(0.0, abs=1e-15)

    def test_bare_number_is_smallest_at_jc_gauge(self):
        params = ModelParams(delta=0.5, eta_max=1.0)
        alpha_g = jc_gauge(0.5)
        at_g = ground_state_photon_number(params, alpha_g)
        for alpha in np.linspace(0.0, 1.0, 21):
            assert ground_state_photon_number(params, alpha) >= at_g - 1e-15


class TestAgainstMomentGroundState:
    @pytest.mark.parametrize("delta", DELTAS)
    @pytest.mark.parametrize("alpha", [0.0, 0.3, 1.0])
    def test_covariance_matches_normal_mode_construction(self, delta, alpha):
        params = ModelParams(delta=delta, eta_max=1.0, alpha=alpha)
        numeric = interacting_ground_state(params, 1.0)
        closed = ground_state_covariance(params, alpha)
        assert np.allclose(numeric.cov, closed.cov, atol=1e-10)

    @pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
    def test_observables_match_closed_forms(self, alpha):
        params = ModelParams(delta=0.5, eta_max=1.0, alpha=alpha)
        state = interacting_ground_state(params, 1.0)
        assert mutual_information(state) == pytest.approx(
            ground_state_mutual_information(params, alpha), abs=1e-9)
        assert photon_number(state, "cavity") == pytest.approx(
            ground_state_photon_number(params, alpha), abs=1e-10)
        assert renormalized_photon_number(state, params, alpha, 1.0) == pytest.approx(
            ground_state_renormalized_number(params, alpha), abs=1e-10)

    def test_closed_form_state_is_pure(self):
        state = ground_state_covariance(ModelParams(delta=2.0, eta_max=1.0), 0.0)
        assert state.purity_det() == pytest.approx(1.0, rel=1e-12)


class TestSymbolicGroundState:
    def test_depends_only_on_charge_ratio(self):
        first = symbolic_ground_state(2.0, 1.0, 4.0, 0.5, 1.0, 0.2)
        second = symbolic_ground_state(1.0, 2.0, 0.5, 0.5, 1.0, 0.2)
        assert first == pytest.approx(second, rel=1e-14)

    def test_reduces_to_dimensionless_coupling(self):
        # e^2/(m v) = 1 with omega = 1/2 is eta = 2
        params = ModelParams(delta=0.5, eta_max=2.0)
        result = symbolic_ground_state(2.0, 1.0, 4.0, 0.5, 1.0, 0.2)
        assert result["mu_alpha"] == pytest.approx(mu_alpha(params, 0.2), rel=1e-14)
        assert result["I_G"] == pytest.approx(ground_state_mutual_information(params, 0.2), rel=1e-14)
        assert result["n_a"] == pytest.approx(ground_state_photon_number(params, 0.2), rel=1e-14)
        assert result["n_c"] == pytest.approx(ground_state_renormalized_number(params, 0.2), rel=1e-14)
        assert result["omega_alpha"] == pytest.approx(derived_frequencies(params, 0.2).omega_alpha)
