"""Command-line entry point.

    epinet <subcommand> --config <path> [--seed <u64>] [--out <dir>]

Subcommands map one-to-one onto experiment kinds; the config file carries all
remaining parameters.  Exit codes: 0 success, 2 configuration error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import sys

from .gillespie import SimulationError
from .harness import ConfigError, load_config, run_experiment
from .harness.run import NumericError
from .netgen import GenerationError
from .ode import IntegrationError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

_SUBCOMMAND_KIND = {
    "generate": "generate",
    "simulate": "simulate",
    "pairwise": "pairwise",
    "compare": "compare",
    "r0": "r0",
    "steady": "steady-sweep",
    "figure": "figure-preset",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epinet",
        description="Epidemics on weighted contact networks: simulation, "
                    "pairwise ODEs, thresholds, steady states.")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in _SUBCOMMAND_KIND:
        p = sub.add_parser(command)
        p.add_argument("--config", required=True,
                       help="path to the JSON experiment config")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config's seed")
        p.add_argument("--out", default=None,
                       help="override the config's output directory")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        expected = _SUBCOMMAND_KIND[args.command]
        if config.kind != expected:
            raise ConfigError("kind", f"subcommand '{args.command}' needs "
                                      f"kind '{expected}', config has "
                                      f"'{config.kind}'")
        result = run_experiment(config, out_dir=args.out, seed=args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericError, SimulationError, GenerationError,
            IntegrationError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(f"{result.kind}: wrote {len(result.files)} file(s) to "
          f"{result.out_dir}")
    for key, value in result.summary.items():
        print(f"  {key}: {value}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
