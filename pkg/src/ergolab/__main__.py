#!/usr/bin/env python3
"""
Entry point for ergolab.

Each subcommand runs one experiment kind from a YAML or JSON configuration and writes its
reports. Exit codes: 0 when the run completed (whatever the verdicts), 1 on a failure
during the run, 2 when the configuration is invalid.
"""

import argparse
import logging
import sys
from typing import Any, get_args

from pydantic import ValidationError

from .config import parse_config, read_config
from .config.models import ExperimentConfig, ExperimentKind
from .errors import ConfigError, UnknownSystem
from .runner import run
from .systems import dump_system_spec, get_zoo_system
from .systems.zoo import interval_map

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ergolab",
        description="Tracing, specification-property, entropy and invariant-measure experiments",
    )
    parser.add_argument(
        "experiment",
        choices=get_args(ExperimentKind),
        help="Experiment to run; overrides the 'experiment' field of the config",
    )
    parser.add_argument(
        "--config",
        "--config-path",
        dest="config_path",
        type=str,
        help="Path to YAML or JSON configuration file",
    )
    parser.add_argument("--seed", type=int, help="Seed overriding the configured one")
    parser.add_argument("--out", dest="out_dir", type=str, help="Output directory overriding output.dir")
    parser.add_argument(
        "--certificate",
        type=str,
        help="Certificate or family JSON (for trace-verify); overrides the configured path",
    )
    classify = parser.add_argument_group("interval-classify overrides")
    classify.add_argument(
        "--map",
        dest="map_name",
        type=str,
        help="Zoo name of an interval map, or a formula in x on [0, 1] such as 'x/2'; overrides the system",
    )
    classify.add_argument("--period-bound", type=int, help="Largest period searched for periodic points")
    classify.add_argument("--samples", type=int, help="Number of start samples")
    parser.add_argument("--verbose", "-v", action="store_true", help="Log at DEBUG level")
    return parser


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def map_system(value: str) -> str | dict[str, Any]:
    """A zoo name as given; any other text as the single-formula map ``x -> value`` on [0, 1]."""
    try:
        get_zoo_system(value)
    except UnknownSystem:
        return dump_system_spec(interval_map(value))
    return value


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    Merge the config file with the command-line overrides and validate.

    Raises:
        ConfigError: If the merged configuration is invalid or names another experiment.
    """
    raw: dict[str, Any] = read_config(args.config_path) if args.config_path else {}
    configured = raw.get("experiment")
    if configured is not None and configured != args.experiment:
        raise ConfigError("experiment", f"Config is for '{configured}' but '{args.experiment}' was requested")
    raw["experiment"] = args.experiment
    if args.seed is not None:
        raw["seed"] = args.seed
    if args.certificate is not None:
        raw["certificate"] = args.certificate
    overrides = {"period_bound": args.period_bound, "samples": args.samples}
    if args.map_name is not None or any(v is not None for v in overrides.values()):
        if args.experiment != "interval-classify":
            raise ConfigError("experiment", "--map, --period-bound and --samples apply to 'interval-classify' only")
        if args.map_name is not None:
            raw["system"] = map_system(args.map_name)
        interval = dict(raw.get("interval") or {})
        interval.update({k: v for k, v in overrides.items() if v is not None})
        raw["interval"] = interval
    return parse_config(raw)


def main() -> None:
    """Run the requested experiment and exit with its status code."""
    args = build_parser().parse_args()
    configure_logging(args.verbose)

    try:
        config = resolve_config(args)
    except (ConfigError, ValidationError, ValueError, FileNotFoundError) as e:
        print(f"❌ Invalid configuration: {e}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)

    try:
        result = run(config, args.out_dir)
    except ConfigError as e:
        print(f"❌ Invalid configuration: {e}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)
    except KeyboardInterrupt:
        print("\n🛑 Stopped by user", file=sys.stderr)
        sys.exit(EXIT_FAILURE)
    except Exception as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        sys.exit(EXIT_FAILURE)

    verdict = result.payload.get("verdict")
    print(f"{result.report}" + (f": {verdict}" if verdict else ""))
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
