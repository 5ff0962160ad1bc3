"""
GaugeSim - gauge-dependent light-matter dynamics
Command-line entry point: simulate | sweep | groundstate | oracle-compare | list-presets
"""

import argparse
import logging
import sys
from typing import List, Optional

from backend_code.errors import ConfigError, GaugeSimError, InvalidParameter
from backend_code.presets import PresetCatalog
from backend_code.run_config import load_config
from backend_code.run_report import VERSION, emit, render_csv, render_json
from frontend_components.groundstate import run_groundstate
from frontend_components.oracle_compare import compare_with_fixtures, format_report, run_oracle_compare
from frontend_components.simulate import run_simulate
from frontend_components.sweep import run_sweep

logger = logging.getLogger("gaugesim")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def configure_logging(verbose: bool):
    """Configure root logging once; log lines go to stderr, results to stdout or --out."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS, help="log at DEBUG level")

    run_args = argparse.ArgumentParser(add_help=False)
    run_args.add_argument("--config", metavar="PATH", help="TOML run file")
    run_args.add_argument("--preset", metavar="NAME", help="named preset (see list-presets)")
    run_args.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    run_args.add_argument("--tol", type=float, metavar="X", help="relative tolerance of the moment integrator")

    parser = argparse.ArgumentParser(prog="gaugesim",
                                     description="Gauge-parameterized two-mode light-matter simulator")
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("simulate", parents=[common, run_args], help="time series for each alpha")
    sweep = sub.add_parser("sweep", parents=[common, run_args], help="final values versus alpha")
    sweep.add_argument("--parallel", type=int, default=1, metavar="N", help="worker processes")
    sub.add_parser("groundstate", parents=[common, run_args], help="closed-form ground-state curves")
    oracle = sub.add_parser("oracle-compare", parents=[common, run_args],
                            help="moment equations versus the truncated Fock oracle")
    fixtures = oracle.add_mutually_exclusive_group()
    fixtures.add_argument("--write-fixtures", metavar="PATH", help="store converged oracle finals")
    fixtures.add_argument("--fixtures", metavar="PATH", help="compare against stored oracle finals instead of rerunning")
    sub.add_parser("list-presets", parents=[common], help="print the preset catalogue")
    return parser


def list_presets() -> str:
    catalog = PresetCatalog()
    return "\n".join(f"{name:<16} {catalog.get_description(name)}" for name in catalog.get_preset_names()) + "\n"


def dispatch(args: argparse.Namespace) -> int:
    if args.command == "list-presets":
        emit(list_presets(), None)
        return EXIT_OK

    cfg = load_config(args.config, args.preset, kind=args.command).with_overrides(tol=args.tol, output_path=args.out)
    logger.info("running %s (preset=%s)", args.command, cfg.preset or "-")

    if args.command == "simulate":
        emit(render_csv(run_simulate(cfg), cfg, args.command), cfg.output_path)
    elif args.command == "sweep":
        if args.parallel < 1:
            raise ConfigError(f"--parallel must be >= 1, got {args.parallel}")
        emit(render_csv(run_sweep(cfg, parallel=args.parallel), cfg, args.command), cfg.output_path)
    elif args.command == "groundstate":
        emit(render_csv(run_groundstate(cfg), cfg, args.command), cfg.output_path)
    elif args.command == "oracle-compare":
        if args.fixtures is not None:
            report = compare_with_fixtures(cfg, args.fixtures)
        else:
            report = run_oracle_compare(cfg, fixtures_path=args.write_fixtures)
        for line in format_report(report).splitlines():
            logger.info(line)
        emit(render_json(report, cfg, args.command), cfg.output_path)
        if not report["passed"]:
            logger.error("oracle comparison failed")
            return EXIT_NUMERICAL
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the subcommand and map errors to exit codes."""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return dispatch(args)
    except (ConfigError, InvalidParameter) as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG
    except GaugeSimError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
