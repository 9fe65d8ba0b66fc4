"""Command line entry point.

    rrde run <config.json> [--out DIR] [--verbose]
    rrde verify <config.json> [--verbose]

Exit status is 0 when every enabled check passes, 1 when a check fails
(the failing checks are named on stderr) and 2 for an invalid config.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from loguru import logger

from ._api import run, verify_all
from .errors import (
    ConfigError,
    InvalidInputError,
    InvariantViolation,
    NonGeometricDriverError,
)

__all__ = ["main", "EXIT_OK", "EXIT_CHECK_FAILED", "EXIT_BAD_CONFIG"]

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_CONFIG = 2

LOG_FORMAT = "<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | {message}"


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rrde",
        description="Run reflected rough differential equation experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="run experiments and write reports")
    run_parser.add_argument("config", type=Path, help="JSON experiment config")
    run_parser.add_argument("--out", type=Path, default=None, help="output directory")
    run_parser.add_argument("--verbose", action="store_true", help="debug logging")

    verify_parser = sub.add_parser("verify", help="run the invariant battery")
    verify_parser.add_argument("config", type=Path, help="JSON experiment config")
    verify_parser.add_argument("--verbose", action="store_true", help="debug logging")
    return parser


def _configure_logging(verbose: bool) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else "INFO", format=LOG_FORMAT)
    logger.enable("rrde")


def main(argv: Optional[List[str]] = None) -> int:
    args = _parser().parse_args(argv)
    _configure_logging(args.verbose)

    try:
        if args.command == "run":
            summary = run(args.config, args.out)
        else:
            summary = verify_all(args.config)
            print(summary.model_dump_json(indent=2))
        summary.raise_for_failures()
    except (ConfigError, InvalidInputError, NonGeometricDriverError) as e:
        logger.error("invalid config: {}", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except InvariantViolation as e:
        for name in e.check.split(", "):
            print(f"check failed: {name}", file=sys.stderr)
        return EXIT_CHECK_FAILED

    logger.info("all checks passed")
    return EXIT_OK
