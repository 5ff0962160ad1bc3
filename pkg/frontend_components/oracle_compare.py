"""
Oracle Comparison Command for GaugeSim
Runs the moment equations and the converged Fock oracle side by side for each
gauge and reports per-observable deviations, truncation drift and pass/fail.
"""

import logging
from typing import Any, Dict, List, Optional

import numpy as np

from backend_code.errors import ConvergenceError
from backend_code.fock_oracle import (
    FockSystem,
    SpectralEnsemble,
    build_hamiltonian,
    converge,
    propagate,
    thermal_ensemble,
    vacuum_vector,
    read_fixtures,
    write_fixtures,
)
from backend_code.model import Constant, ModelParams, envelope_value
from backend_code.observables import mutual_information, photon_number
from backend_code.run_config import RunConfig
from frontend_components.simulate import simulate_alpha

logger = logging.getLogger(__name__)

BASE_TOLERANCE = 1e-6
OBSERVABLES = ("n_a", "n_b", "I")


def oracle_initial(cfg: RunConfig, sys: FockSystem, params: ModelParams):
    """Fock-space counterpart of the configured initial state."""
    if cfg.initial.kind == "thermal":
        return thermal_ensemble(sys, cfg.initial.beta_omega_c, cfg.initial.beta_omega_m)
    if cfg.initial.kind == "interacting-ground":
        level = envelope_value(cfg.coupling_envelope(), float(cfg.grid.times()[0]))
        h = build_hamiltonian(sys, params, Constant(level), 0.0)
        _, vectors = np.linalg.eigh(h)
        return SpectralEnsemble.pure(vectors[:, 0])
    return vacuum_vector(sys)


def oracle_runner(cfg: RunConfig, params: ModelParams):
    env = cfg.coupling_envelope()
    times = cfg.grid.times()

    def run(dim_a: int, dim_b: int, steps_per_cycle: int) -> Dict[str, np.ndarray]:
        sys = FockSystem(dim_a, dim_b)
        series = propagate(sys, oracle_initial(cfg, sys, params), params, env, cfg.variant, times,
                           steps_per_cycle=steps_per_cycle)
        return {"n_a": series.n_a, "n_b": series.n_b, "I": series.mutual_information}

    return run


def fixture_key(cfg: RunConfig, alpha: float) -> str:
    return f"{cfg.preset or 'run'}-alpha-{alpha:.12g}"


def gaussian_series(cfg: RunConfig, alpha: float) -> Dict[str, np.ndarray]:
    record = simulate_alpha(cfg, alpha)
    return {
        "n_a": np.array([photon_number(s, "cavity") for s in record.states]),
        "n_b": np.array([photon_number(s, "matter") for s in record.states]),
        "I": np.array([mutual_information(s) for s in record.states]),
    }


def compare_alpha(cfg: RunConfig, alpha: float) -> Dict[str, Any]:
    params = cfg.model_params(alpha)
    gaussian = gaussian_series(cfg, alpha)
    case: Dict[str, Any] = {"alpha": alpha}
    try:
        result = converge(oracle_runner(cfg, params), dims=(cfg.oracle.dim_a, cfg.oracle.dim_b),
                          steps_per_cycle=cfg.oracle.steps_per_cycle, max_dim=cfg.oracle.max_dim,
                          gate=cfg.oracle.gate)
    except ConvergenceError as exc:
        logger.warning("alpha=%.6g: %s", alpha, exc)
        case.update(status="convergence-not-reached", drift=exc.drift, passed=False, message=str(exc))
        return case

    tolerance = max(BASE_TOLERANCE, result.drift)
    deviations = {key: float(np.max(np.abs(gaussian[key] - result.values[key]))) for key in OBSERVABLES}
    case.update(
        status="converged",
        dims=list(result.dims),
        steps_per_cycle=result.steps_per_cycle,
        drift=result.drift,
        tolerance=tolerance,
        max_deviation=deviations,
        finals={f"{key}_final": float(result.values[key][-1]) for key in OBSERVABLES},
        passed=all(dev <= tolerance for dev in deviations.values()),
    )
    return case


def run_oracle_compare(cfg: RunConfig, fixtures_path: Optional[str] = None) -> Dict[str, Any]:
    """Machine-readable comparison report; optionally freezes the oracle finals as fixtures."""
    cases: List[Dict[str, Any]] = [compare_alpha(cfg, alpha) for alpha in cfg.alphas]
    report = {"cases": cases, "passed": all(case["passed"] for case in cases)}
    if fixtures_path is not None:
        values = {
            fixture_key(cfg, case["alpha"]): {**case["finals"], "drift": case["drift"],
                                              "dim_a": float(case["dims"][0]), "dim_b": float(case["dims"][1])}
            for case in cases if case["status"] == "converged"
        }
        write_fixtures(fixtures_path, values)
    return report


def compare_with_fixtures(cfg: RunConfig, fixtures_path: str) -> Dict[str, Any]:
    """Gaussian finals against oracle finals frozen by an earlier --write-fixtures run."""
    stored = read_fixtures(fixtures_path)
    cases: List[Dict[str, Any]] = []
    for alpha in cfg.alphas:
        entry = stored.get(fixture_key(cfg, alpha))
        if entry is None:
            logger.warning("alpha=%.6g: no fixture '%s' in %s", alpha, fixture_key(cfg, alpha), fixtures_path)
            cases.append({"alpha": alpha, "status": "fixture-missing", "drift": float("nan"), "passed": False})
            continue
        gaussian = gaussian_series(cfg, alpha)
        tolerance = max(BASE_TOLERANCE, entry["drift"])
        deviations = {key: abs(float(gaussian[key][-1]) - entry[f"{key}_final"]) for key in OBSERVABLES}
        cases.append({
            "alpha": alpha,
            "status": "fixture",
            "dims": [int(entry["dim_a"]), int(entry["dim_b"])],
            "drift": entry["drift"],
            "tolerance": tolerance,
            "max_deviation": deviations,
            "passed": all(dev <= tolerance for dev in deviations.values()),
        })
    return {"cases": cases, "passed": all(case["passed"] for case in cases)}


def format_report(report: Dict[str, Any]) -> str:
    """Human-readable summary, one line per gauge."""
    lines = []
    for case in report["cases"]:
        if case["status"] not in ("converged", "fixture"):
            status = case["status"].replace("-", " ").upper()
            lines.append(f"alpha={case['alpha']:.6g}  {status}  drift={case['drift']:.3e}")
            continue
        devs = "  ".join(f"{key}:{value:.2e}" for key, value in case["max_deviation"].items())
        verdict = "PASS" if case["passed"] else "FAIL"
        lines.append(f"alpha={case['alpha']:.6g}  {verdict}  {devs}  drift={case['drift']:.2e}  dims={case['dims']}")
    lines.append("overall: " + ("PASS" if report["passed"] else "FAIL"))
    return "\n".join(lines)
