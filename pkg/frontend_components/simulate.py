"""
Simulate Command for GaugeSim
Time series of photon numbers, mutual information and bare energies for each gauge.
"""

import logging
from typing import List

import pandas as pd

from backend_code.gaussian_dynamics import TrajectoryRecord, evolve
from backend_code.run_config import RunConfig

logger = logging.getLogger(__name__)

COLUMNS = ["t", "alpha", "mu", "n_a", "n_b", "I", "E_c", "E_m", "work"]


def simulate_alpha(cfg: RunConfig, alpha: float) -> TrajectoryRecord:
    """Moment trajectory for one gauge on the configured grid."""
    params = cfg.model_params(alpha)
    state0 = cfg.initial_state(params)
    return evolve(state0, params, cfg.coupling_envelope(), cfg.variant, cfg.grid.times(),
                  tol=cfg.solver.tol, max_step=cfg.solver.max_step)


def run_simulate(cfg: RunConfig) -> pd.DataFrame:
    """One block of rows per alpha, in configuration order."""
    frames: List[pd.DataFrame] = []
    for alpha in cfg.alphas:
        record = simulate_alpha(cfg, alpha)
        frame = record.to_frame()
        logger.info("alpha=%.6g (%s): final n_a=%.10g, I=%.10g", alpha, cfg.variant.label(),
                    frame["n_a"].iloc[-1], frame["I"].iloc[-1])
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)[COLUMNS]
