"""Command-line entry point: ``nvholo <verb> [--config PATH] [--out DIR] ...``.

Exit codes: 0 pass, 1 physics-check failure, 2 configuration error.
"""

import argparse
import json
import sys
from pathlib import Path

from src.config import get_config
from src.scenarios.config import ScenarioConfig, load_scenario
from src.scenarios.defaults import default_document, default_scenario, scenario_names
from src.scenarios.runners import RUNNERS, run_scenario
from src.utils.errors import ConfigurationError, NVHoloError, PhysicsCheckError
from src.utils.logger import configure_logging, get_logger

EXIT_OK = 0
EXIT_PHYSICS = 1
EXIT_CONFIG = 2

logger = get_logger("cli")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nvholo",
        description="Holonomic single-qubit rotations in NV centers: simulation and checks.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in RUNNERS:
        run = sub.add_parser(verb, help=f"run the {verb} scenario")
        run.add_argument("--config", type=Path, help="scenario JSON (defaults to the embedded one)")
        run.add_argument("--out", type=Path, default=Path("out"), help="output directory")
        run.add_argument("--steps", type=int, help="override the number of time steps")
        run.add_argument("--seed", type=int, help="seed for randomized checks")
    show = sub.add_parser("print-config", help="print an embedded scenario or the config schema")
    show.add_argument("--scenario", choices=scenario_names(), default="fig3")
    show.add_argument("--schema", action="store_true", help="print the JSON schema instead")
    return parser


def _print_config(args: argparse.Namespace) -> int:
    if args.schema:
        payload = ScenarioConfig.model_json_schema(by_alias=True)
    else:
        payload = default_document(args.scenario)
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def _run(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config) if args.config else default_scenario(args.verb)
    scenario = scenario.with_overrides(steps=args.steps, seed=args.seed)
    result = run_scenario(args.verb, scenario, args.out)
    for path in result.files:
        logger.info("Output: %s", path)
    result.raise_for_failure()
    logger.info("%s passed", result.name)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = get_config()
    problems = config.validate_runtime() + config.validate_numerics()
    if problems:
        for problem in problems:
            sys.stderr.write(f"configuration error: {problem}\n")
        return EXIT_CONFIG
    configure_logging(config.LOG_LEVEL)

    if args.verb == "print-config":
        return _print_config(args)
    try:
        return _run(args)
    except ConfigurationError as e:
        sys.stderr.write(f"configuration error: {e}\n")
        return EXIT_CONFIG
    except PhysicsCheckError as e:
        logger.error("Physics check failed: %s", e)
        return EXIT_PHYSICS
    except NVHoloError as e:
        logger.error("Run failed: %s", e)
        return EXIT_PHYSICS


if __name__ == "__main__":
    sys.exit(main())
