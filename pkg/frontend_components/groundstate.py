"""
Ground-State Command for GaugeSim
Closed-form ground-state curves versus alpha for each configured coupling.
"""

import pandas as pd

from backend_code.ground_state import (
    derived_frequencies,
    ground_state_mutual_information,
    ground_state_photon_number,
    ground_state_renormalized_number,
)
from backend_code.run_config import RunConfig

COLUMNS = ["eta", "alpha", "I_G", "n_a", "n_c", "omega_alpha"]


def run_groundstate(cfg: RunConfig) -> pd.DataFrame:
    rows = []
    for eta in cfg.eta_values:
        params = cfg.model_params(0.0, eta_max=eta)
        for alpha in cfg.alphas:
            rows.append({
                "eta": eta,
                "alpha": alpha,
                "I_G": ground_state_mutual_information(params, alpha),
                "n_a": ground_state_photon_number(params, alpha),
                "n_c": ground_state_renormalized_number(params, alpha),
                "omega_alpha": derived_frequencies(params, alpha).omega_alpha,
            })
    return pd.DataFrame(rows, columns=COLUMNS)
