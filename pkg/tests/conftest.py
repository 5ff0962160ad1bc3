"""
Shared fixtures for the GaugeSim test suite.
"""

import numpy as np
import pytest

from backend_code.model import ModelParams, SmoothedBox, jc_gauge
from backend_code.transit import TransitScenario, transit_envelope

DELTA = 0.5
ETA = 1.0


@pytest.fixture
def tol():
    """Numerical tolerance for closed-form comparisons."""
    return 1e-10


@pytest.fixture
def params():
    return ModelParams(delta=DELTA, eta_max=ETA, alpha=0.0)


@pytest.fixture
def gauges():
    """Coulomb, Jaynes-Cummings and multipolar gauges at delta = 1/2."""
    return [0.0, jc_gauge(DELTA), 1.0]


@pytest.fixture
def box():
    """Smoothed box with tau = 10 and a switching time of about 4."""
    return SmoothedBox(t0=5.0, tau=10.0, s=2.3)


@pytest.fixture
def box_grid():
    return np.linspace(0.0, 20.0, 81)


@pytest.fixture
def transit():
    return transit_envelope(TransitScenario(ratio_wc=1.0, offset_h=5.0))


@pytest.fixture
def transit_grid():
    return np.linspace(0.0, 10.0, 41)
