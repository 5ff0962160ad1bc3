"""
Presets for GaugeSim
Named run configurations that reproduce the published figure regimes.
Each preset is a plain nested dictionary in the same schema as a TOML run file.
"""

import copy
import logging
import math
from typing import Any, Dict, List

from backend_code.errors import ConfigError

logger = logging.getLogger(__name__)

JC = "alpha_g"

_FIG4_BOX = {"kind": "smoothed-box", "t0": 5.0, "tau": 10.0, "s": 2.3}


class PresetCatalog:
    """Catalogue of named run configurations."""

    def __init__(self):
        """
        Structure: {name: {"description": str, "config": run-file dictionary}}.
        The string "alpha_g" inside an alpha list stands for 1/(1 + delta).
        """
        self.presets = {
            "fig2": {
                "description": "Gaussian transit, eta=1, delta=1/2, photon number for alpha in {0, alpha_g, 1}",
                "config": {
                    "kind": "simulate",
                    "scenario": "transit",
                    "model": {"delta": 0.5, "eta_max": 1.0},
                    "alpha": {"values": [0.0, JC, 1.0]},
                    "transit": {"ratio_wc": 1.0, "offset_h": 5.0},
                    "initial": {"kind": "vacuum"},
                    "variant": {"kind": "standard"},
                    "grid": {"t_end": 10.0, "samples": 201},
                },
            },
            "fig3": {
                "description": "As fig2, driven by the tilde family with theta = pi/2",
                "config": {
                    "kind": "simulate",
                    "scenario": "transit",
                    "model": {"delta": 0.5, "eta_max": 1.0},
                    "alpha": {"values": [0.0, JC, 1.0]},
                    "transit": {"ratio_wc": 1.0, "offset_h": 5.0, "theta": 0.5 * math.pi},
                    "initial": {"kind": "vacuum"},
                    "variant": {"kind": "tilde"},
                    "grid": {"t_end": 10.0, "samples": 201},
                },
            },
            "fig4": {
                "description": "Smoothed box (tau=10, switch ~4), eta=1, delta=1/2, photon number vs time",
                "config": {
                    "kind": "simulate",
                    "scenario": "generic-envelope",
                    "model": {"delta": 0.5, "eta_max": 1.0},
                    "alpha": {"values": [0.0, JC, 1.0]},
                    "envelope": dict(_FIG4_BOX),
                    "initial": {"kind": "vacuum"},
                    "grid": {"t_end": 20.0, "samples": 401},
                },
            },
            "fig5": self._fig5(0.5, 1.0, "delta=1/2, eta=1"),
            "fig5-resonant": self._fig5(1.0, 1.0, "delta=1, eta=1"),
            "fig5-detuned": self._fig5(2.0, 0.5, "delta=2, eta=1/2"),
            "fig6": {
                "description": "Energy changes and work vs alpha from Gibbs states, eta=1, delta=3, beta_m = 2 beta_c",
                "config": {
                    "kind": "sweep",
                    "scenario": "generic-envelope",
                    "model": {"delta": 3.0, "eta_max": 1.0},
                    "alpha": {"start": 0.0, "stop": 1.0, "num": 21},
                    "envelope": dict(_FIG4_BOX),
                    "initial": {"kind": "thermal", "beta_omega_c": 1.5, "beta_omega_m": 1.0},
                    "grid": {"t_end": 20.0, "samples": 401},
                },
            },
            "adiabatic": {
                "description": "Slow smoothed box (switch ~100), eta=1, delta=1/2; gauges agree",
                "config": {
                    "kind": "simulate",
                    "scenario": "generic-envelope",
                    "model": {"delta": 0.5, "eta_max": 1.0},
                    "alpha": {"values": [0.0, JC, 1.0]},
                    "envelope": {"kind": "smoothed-box", "t0": 200.0, "tau": 200.0, "s": 0.092},
                    "initial": {"kind": "vacuum"},
                    "grid": {"t_end": 600.0, "samples": 601},
                },
            },
            "supp-fig7": {
                "description": "Ground-state mutual information vs alpha, delta=1/2, eta in {0.1, 0.5, 1}",
                "config": {
                    "kind": "groundstate",
                    "scenario": "ground-state",
                    "model": {"delta": 0.5, "eta_values": [0.1, 0.5, 1.0]},
                    "alpha": {"start": 0.0, "stop": 1.0, "num": 101},
                },
            },
            "supp-fig8": {
                "description": "Ground-state n_a and n_c vs alpha, delta=2, eta in {0.1, 0.5, 1}",
                "config": {
                    "kind": "groundstate",
                    "scenario": "ground-state",
                    "model": {"delta": 2.0, "eta_values": [0.1, 0.5, 1.0]},
                    "alpha": {"start": 0.0, "stop": 1.0, "num": 101},
                },
            },
        }

    @staticmethod
    def _fig5(delta: float, eta: float, label: str) -> Dict[str, Any]:
        return {
            "description": f"Final mutual information vs alpha after a smoothed box, {label}",
            "config": {
                "kind": "sweep",
                "scenario": "generic-envelope",
                "model": {"delta": delta, "eta_max": eta},
                "alpha": {"start": 0.0, "stop": 1.0, "num": 21, "include_alpha_g": True},
                "envelope": dict(_FIG4_BOX),
                "initial": {"kind": "vacuum"},
                "grid": {"t_end": 20.0, "samples": 401},
            },
        }

    def get_preset_names(self) -> List[str]:
        return sorted(self.presets)

    def get_description(self, name: str) -> str:
        return self._entry(name)["description"]

    def get_config(self, name: str) -> Dict[str, Any]:
        """Deep copy of a preset's run-file dictionary."""
        return copy.deepcopy(self._entry(name)["config"])

    def is_valid_preset(self, name: str) -> bool:
        return name in self.presets

    def _entry(self, name: str) -> Dict[str, Any]:
        if name not in self.presets:
            raise ConfigError(f"unknown preset '{name}'; available: {', '.join(self.get_preset_names())}")
        return self.presets[name]
