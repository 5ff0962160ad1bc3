"""
Run Reports for GaugeSim
Serializes result tables as CSV (17 significant digits) and reports as JSON,
each preceded by a provenance header. Nothing time-dependent is written, so
identical configurations give identical bytes.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from backend_code.fock_oracle import FIXTURE_VERSION
from backend_code.run_config import RunConfig, config_digest

logger = logging.getLogger(__name__)

PROGRAM = "gaugesim"
VERSION = "1.0.0"
UNITS = "units: hbar = 1, omega_m = 1; times in 1/omega_m, energies in omega_m, entropies in nats"


def provenance_lines(cfg: RunConfig, subcommand: str) -> List[str]:
    """Header lines, each starting with '# '."""
    config_json = json.dumps(cfg.to_dict(), sort_keys=True, separators=(",", ":"), default=str)
    lines = [
        f"{PROGRAM} {VERSION}",
        f"subcommand: {subcommand}",
        f"preset: {cfg.preset or '-'}",
        f"config-sha256: {config_digest(cfg)}",
        f"config: {config_json}",
        f"tol: {cfg.solver.tol!r}",
        f"fixture_version: {FIXTURE_VERSION}",
        UNITS,
    ]
    if cfg.transit is not None:
        lines.append(f"transit offset_h: {cfg.transit.offset_h!r}")
    return [f"# {line}" for line in lines]


def render_csv(frame: pd.DataFrame, cfg: RunConfig, subcommand: str) -> str:
    body = frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")
    return "\n".join(provenance_lines(cfg, subcommand)) + "\n" + body


def render_json(report: Dict[str, Any], cfg: RunConfig, subcommand: str) -> str:
    """JSON document with the provenance header stored under 'provenance'."""
    payload = {"provenance": [line[2:] for line in provenance_lines(cfg, subcommand)], **report}
    return json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n"


def emit(text: str, path: Optional[str]) -> Optional[Path]:
    """Write to `path`, or to standard output when no path is given."""
    if path is None:
        print(text, end="")
        return None
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
    logger.info("wrote %s", target)
    return target
