"""
Run Configuration for GaugeSim
Parses TOML run files (optionally layered on a named preset) into a frozen,
validated RunConfig tree and builds the model objects a run needs.
"""

import copy
import hashlib
import json
import logging
import math
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np

from backend_code.errors import ConfigError, GaugeSimError
from backend_code.gaussian_dynamics import (
    DEFAULT_TOL,
    GaussianState,
    interacting_ground_state,
    thermal_product_state,
    vacuum_state,
)
from backend_code.model import (
    Constant,
    CouplingEnvelope,
    GaussianTransit,
    ModelParams,
    SmoothedBox,
    envelope_value,
    jc_gauge,
)
from backend_code.presets import JC, PresetCatalog
from backend_code.transit import DEFAULT_OFFSET_H, TransitScenario, Variant, transit_envelope

logger = logging.getLogger(__name__)

KINDS = ("simulate", "sweep", "groundstate", "oracle-compare")
SCENARIOS = ("generic-envelope", "transit", "ground-state", "oracle-compare")

SCHEMA = {
    "": {"kind", "scenario", "model", "alpha", "envelope", "transit", "initial", "variant",
         "grid", "solver", "oracle", "output"},
    "model": {"delta", "eta_max", "eta_values"},
    "alpha": {"values", "start", "stop", "num", "include_alpha_g"},
    "envelope": {"kind", "level", "t0", "tau", "s", "h", "nu", "w_c"},
    "transit": {"ratio_wc", "offset_h", "theta"},
    "initial": {"kind", "beta_omega_c", "beta_omega_m"},
    "variant": {"kind", "theta"},
    "grid": {"t_end", "samples"},
    "solver": {"tol", "max_step"},
    "oracle": {"dim_a", "dim_b", "steps_per_cycle", "max_dim", "gate"},
    "output": {"path"},
}


@dataclass(frozen=True)
class EnvelopeSpec:
    kind: str = "constant"
    level: float = 1.0
    t0: Optional[float] = None
    tau: Optional[float] = None
    s: Optional[float] = None
    h: Optional[float] = None
    nu: Optional[float] = None
    w_c: Optional[float] = None


@dataclass(frozen=True)
class InitialSpec:
    kind: str = "vacuum"
    beta_omega_c: Optional[float] = None
    beta_omega_m: Optional[float] = None


@dataclass(frozen=True)
class GridSpec:
    t_end: float = 20.0
    samples: int = 401

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end, self.samples)


@dataclass(frozen=True)
class SolverSpec:
    tol: float = DEFAULT_TOL
    max_step: Optional[float] = None


@dataclass(frozen=True)
class OracleSpec:
    dim_a: int = 30
    dim_b: int = 30
    steps_per_cycle: int = 200
    max_dim: int = 60
    gate: float = 1e-7


@dataclass(frozen=True)
class RunConfig:
    """Validated description of one run; fully deterministic, no seeds."""

    kind: str
    scenario: str
    delta: float
    eta_values: Tuple[float, ...]
    alphas: Tuple[float, ...]
    envelope: EnvelopeSpec = field(default_factory=EnvelopeSpec)
    transit: Optional[TransitScenario] = None
    initial: InitialSpec = field(default_factory=InitialSpec)
    variant: Variant = field(default_factory=Variant.standard)
    grid: GridSpec = field(default_factory=GridSpec)
    solver: SolverSpec = field(default_factory=SolverSpec)
    oracle: OracleSpec = field(default_factory=OracleSpec)
    output_path: Optional[str] = None
    preset: Optional[str] = None

    @property
    def eta_max(self) -> float:
        return self.eta_values[0]

    def model_params(self, alpha: float, eta_max: Optional[float] = None) -> ModelParams:
        return ModelParams(delta=self.delta, eta_max=self.eta_max if eta_max is None else eta_max, alpha=alpha)

    def coupling_envelope(self) -> CouplingEnvelope:
        if self.scenario == "transit":
            return transit_envelope(self.transit)
        env = self.envelope
        if env.kind == "constant":
            return Constant(env.level)
        if env.kind == "smoothed-box":
            return SmoothedBox(t0=env.t0, tau=env.tau, s=env.s)
        return GaussianTransit(h=env.h, nu=env.nu, w_c=env.w_c)

    def initial_state(self, params: ModelParams) -> GaussianState:
        if self.initial.kind == "thermal":
            return thermal_product_state(self.initial.beta_omega_c, self.initial.beta_omega_m)
        if self.initial.kind == "interacting-ground":
            level = envelope_value(self.coupling_envelope(), float(self.grid.times()[0]))
            return interacting_ground_state(params, level)
        return vacuum_state()

    def betas(self) -> Tuple[float, float]:
        """(beta_m, beta_c) in units of 1/omega_m; only meaningful for thermal runs."""
        return self.initial.beta_omega_m, self.initial.beta_omega_c / self.delta

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def with_overrides(self, tol: Optional[float] = None, output_path: Optional[str] = None) -> "RunConfig":
        solver = self.solver if tol is None else SolverSpec(tol=_tolerance(tol), max_step=self.solver.max_step)
        return replace(self, solver=solver, output_path=output_path or self.output_path)


def config_digest(cfg: RunConfig) -> str:
    """SHA-256 of the canonical JSON form of a configuration."""
    canonical = json.dumps(cfg.to_dict(), sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _check_keys(raw: Dict[str, Any], section: str):
    for key in raw:
        if key not in SCHEMA[section]:
            where = f"section [{section}]" if section else "the top level"
            raise ConfigError(f"unknown key '{key}' in {where}")


def _number(section: Dict[str, Any], key: str, where: str, default=None, positive=False, integer=False):
    value = section.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"[{where}] {key} must be a number, got {value!r}")
    if integer and not float(value).is_integer():
        raise ConfigError(f"[{where}] {key} must be an integer, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"[{where}] {key} must be finite, got {value!r}")
    if positive and value <= 0:
        raise ConfigError(f"[{where}] {key} must be > 0, got {value!r}")
    return int(value) if integer else float(value)


def _choice(section: Dict[str, Any], key: str, where: str, options, default=None) -> str:
    value = section.get(key, default)
    if value not in options:
        raise ConfigError(f"[{where}] {key} must be one of {list(options)}, got {value!r}")
    return value


def _tolerance(tol: float) -> float:
    if not 1e-14 < tol < 1e-3:
        raise ConfigError(f"tol must lie in (1e-14, 1e-3), got {tol}")
    return tol


def _section(raw: Dict[str, Any], name: str) -> Dict[str, Any]:
    section = raw.get(name, {})
    if not isinstance(section, dict):
        raise ConfigError(f"[{name}] must be a table")
    _check_keys(section, name)
    return section


def _check_scenario(kind: str, scenario: str):
    # ground-state runs have no switching; oracle-compare scenarios drive a generic envelope
    if (kind == "groundstate") != (scenario == "ground-state"):
        raise ConfigError(f"scenario '{scenario}' cannot run as kind '{kind}'; "
                          "the ground-state scenario pairs only with groundstate")
    if scenario == "oracle-compare" and kind != "oracle-compare":
        raise ConfigError(f"scenario 'oracle-compare' cannot run as kind '{kind}'")


def _alphas(section: Dict[str, Any], delta: float) -> Tuple[float, ...]:
    alpha_g = jc_gauge(delta)
    if "values" in section:
        if any(k in section for k in ("start", "stop", "num")):
            raise ConfigError("[alpha] give either values or start/stop/num, not both")
        values = []
        for item in section["values"]:
            if item == JC:
                values.append(alpha_g)
            elif isinstance(item, (int, float)) and not isinstance(item, bool) and math.isfinite(item):
                values.append(float(item))
            else:
                raise ConfigError(f"[alpha] values entries must be numbers or '{JC}', got {item!r}")
    else:
        start = _number(section, "start", "alpha", default=0.0)
        stop = _number(section, "stop", "alpha", default=1.0)
        num = _number(section, "num", "alpha", default=21, positive=True, integer=True)
        values = [float(v) for v in np.linspace(start, stop, num)]
        if section.get("include_alpha_g", False) and not any(abs(v - alpha_g) < 1e-12 for v in values):
            values = sorted(values + [alpha_g])
    if not values:
        raise ConfigError("[alpha] grid is empty")
    return tuple(values)


def parse_config(raw: Dict[str, Any], preset: Optional[str] = None) -> RunConfig:
    """Validate a raw run-file dictionary into a RunConfig."""
    _check_keys(raw, "")
    kind = _choice(raw, "kind", "top level", KINDS)
    scenario = _choice(raw, "scenario", "top level", SCENARIOS,
                       default="ground-state" if kind == "groundstate" else "generic-envelope")
    _check_scenario(kind, scenario)

    model = _section(raw, "model")
    delta = _number(model, "delta", "model", positive=True)
    if delta is None:
        raise ConfigError("[model] delta is required")
    if "eta_values" in model:
        raw_etas = model["eta_values"]
        if not isinstance(raw_etas, list) or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in raw_etas):
            raise ConfigError("[model] eta_values must be a list of numbers")
        etas = tuple(float(v) for v in raw_etas)
        if not etas or any(not math.isfinite(e) or e < 0 for e in etas):
            raise ConfigError("[model] eta_values must be a non-empty list of numbers >= 0")
    else:
        eta = _number(model, "eta_max", "model", default=1.0)
        if eta < 0:
            raise ConfigError(f"[model] eta_max must be >= 0, got {eta}")
        etas = (eta,)

    alphas = _alphas(_section(raw, "alpha"), delta)

    env_raw = _section(raw, "envelope")
    env_kind = _choice(env_raw, "kind", "envelope", ("constant", "smoothed-box", "gaussian-transit"),
                       default="constant")
    envelope = EnvelopeSpec(
        kind=env_kind,
        level=_number(env_raw, "level", "envelope", default=1.0),
        t0=_number(env_raw, "t0", "envelope", positive=True),
        tau=_number(env_raw, "tau", "envelope", positive=True),
        s=_number(env_raw, "s", "envelope", positive=True),
        h=_number(env_raw, "h", "envelope"),
        nu=_number(env_raw, "nu", "envelope", positive=True),
        w_c=_number(env_raw, "w_c", "envelope", positive=True),
    )
    required = {"smoothed-box": ("t0", "tau", "s"), "gaussian-transit": ("h", "nu", "w_c")}
    for key in required.get(env_kind, ()):
        if getattr(envelope, key) is None:
            raise ConfigError(f"[envelope] {key} is required for kind '{env_kind}'")

    transit = None
    transit_raw = _section(raw, "transit")
    if transit_raw and scenario != "transit":
        raise ConfigError(f"[transit] only applies to scenario = \"transit\", not \"{scenario}\"")
    if scenario == "transit":
        try:
            transit = TransitScenario(
                ratio_wc=_number(transit_raw, "ratio_wc", "transit", default=1.0, positive=True),
                offset_h=_number(transit_raw, "offset_h", "transit", default=DEFAULT_OFFSET_H),
                theta=_number(transit_raw, "theta", "transit", default=0.5 * math.pi),
            )
        except GaugeSimError as exc:
            raise ConfigError(f"[transit] {exc}") from exc

    init_raw = _section(raw, "initial")
    initial = InitialSpec(
        kind=_choice(init_raw, "kind", "initial", ("vacuum", "thermal", "interacting-ground"), default="vacuum"),
        beta_omega_c=_number(init_raw, "beta_omega_c", "initial", positive=True),
        beta_omega_m=_number(init_raw, "beta_omega_m", "initial", positive=True),
    )
    if initial.kind == "thermal" and (initial.beta_omega_c is None or initial.beta_omega_m is None):
        raise ConfigError("[initial] thermal states need beta_omega_c and beta_omega_m")

    var_raw = _section(raw, "variant")
    var_kind = _choice(var_raw, "kind", "variant", ("standard", "tilde", "tilde-averaged"), default="standard")
    if transit is not None and "theta" in var_raw:
        raise ConfigError("[variant] theta is not used by transit runs; set the orientation with [transit] theta")
    theta = None
    if var_kind == "tilde":
        theta = transit.theta if transit is not None else _number(var_raw, "theta", "variant")
    try:
        variant = Variant(var_kind, theta)
    except GaugeSimError as exc:
        raise ConfigError(f"[variant] {exc}") from exc

    grid_raw = _section(raw, "grid")
    grid = GridSpec(
        t_end=_number(grid_raw, "t_end", "grid", default=20.0, positive=True),
        samples=_number(grid_raw, "samples", "grid", default=401, positive=True, integer=True),
    )
    if grid.samples < 2:
        raise ConfigError("[grid] samples must be >= 2")

    solver_raw = _section(raw, "solver")
    solver = SolverSpec(
        tol=_tolerance(_number(solver_raw, "tol", "solver", default=DEFAULT_TOL, positive=True)),
        max_step=_number(solver_raw, "max_step", "solver", positive=True),
    )

    oracle_raw = _section(raw, "oracle")
    oracle = OracleSpec(
        dim_a=_number(oracle_raw, "dim_a", "oracle", default=30, positive=True, integer=True),
        dim_b=_number(oracle_raw, "dim_b", "oracle", default=30, positive=True, integer=True),
        steps_per_cycle=_number(oracle_raw, "steps_per_cycle", "oracle", default=200, positive=True, integer=True),
        max_dim=_number(oracle_raw, "max_dim", "oracle", default=60, positive=True, integer=True),
        gate=_number(oracle_raw, "gate", "oracle", default=1e-7, positive=True),
    )
    if min(oracle.dim_a, oracle.dim_b) < 2:
        raise ConfigError("[oracle] dimensions must be >= 2")

    output_raw = _section(raw, "output")
    output_path = output_raw.get("path")
    if output_path is not None and not isinstance(output_path, str):
        raise ConfigError("[output] path must be a string")

    return RunConfig(kind=kind, scenario=scenario, delta=delta, eta_values=etas, alphas=alphas,
                     envelope=envelope, transit=transit, initial=initial, variant=variant, grid=grid,
                     solver=solver, oracle=oracle, output_path=output_path, preset=preset)


def load_config(path: Optional[str] = None, preset: Optional[str] = None,
                kind: Optional[str] = None) -> RunConfig:
    """Preset values, overridden by the run file, overridden by the subcommand kind."""
    if path is None and preset is None:
        raise ConfigError("either --config or --preset is required")
    raw: Dict[str, Any] = {}
    if preset is not None:
        raw = PresetCatalog().get_config(preset)
    if path is not None:
        try:
            with open(Path(path), "rb") as handle:
                raw = deep_merge(raw, tomllib.load(handle))
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid TOML: {exc}") from exc
    if kind is not None:
        raw["kind"] = kind
    logger.debug("merged configuration: %s", raw)
    return parse_config(raw, preset=preset)
