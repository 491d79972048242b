"""Command-line driver.

Subcommands: simulate, resonance-scan, mfe-order, invariants.
Exit codes: 0 success, 2 validation error, 3 blow-up, 4 resonant-tau refusal.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, ExperimentConfig, load_config
from .experiments import (
    ResonantTauRefusal,
    cmd_invariants,
    cmd_mfe_order,
    cmd_resonance_scan,
    cmd_simulate,
)
from .integrator import BlowUpError
from .mfe import ResonantStepError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BLOWUP = 3
EXIT_RESONANT = 4


def _parse_floats(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavestrata",
        description="Spectral wave-equation runs, resonance scans and expansion diagnostics.",
    )
    parser.add_argument("--config", help="flat key = value configuration file")
    parser.add_argument("--out", help="output path (overrides the config's 'out')")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for scans (default 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("simulate", help="integrate single-mode initial data, write energy trace CSV")

    scan = sub.add_parser("resonance-scan", help="classify a grid of step-sizes")
    scan.add_argument("--taus", required=True,
                      help="comma-separated step-sizes, e.g. '0.05,0.4212'")

    order = sub.add_parser("mfe-order", help="expansion error vs eps order study")
    order.add_argument("--eps-list", default="1e-2,1e-3,1e-4,1e-5,1e-6,1e-7,1e-8",
                       help="comma-separated eps values")

    sub.add_parser("invariants", help="tabulate almost-invariant energies over [0, 1]")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config) if args.config else ExperimentConfig().validate()
        out = args.out or config.out
        if args.command == "simulate":
            cmd_simulate(config, out)
        elif args.command == "resonance-scan":
            cmd_resonance_scan(_parse_floats(args.taus), config, out, threads=args.threads)
        elif args.command == "mfe-order":
            cmd_mfe_order(config, _parse_floats(args.eps_list), out, threads=args.threads)
        elif args.command == "invariants":
            cmd_invariants(config, out)
    except (ResonantTauRefusal, ResonantStepError) as err:
        print(f"resonant step-size refused: {err}", file=sys.stderr)
        return EXIT_RESONANT
    except BlowUpError as err:
        print(f"blow-up: {err} (step {err.step}); partial trace flushed", file=sys.stderr)
        return EXIT_BLOWUP
    except (ConfigError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
