"""Command-line entry point."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from exceptional_primes import __version__
from exceptional_primes.cli.commands import (
    analyze,
    bounds,
    cheb_lab,
    compare,
    gl2_selftest,
)
from exceptional_primes.core.config import settings
from exceptional_primes.core.exceptions import (
    EXIT_INVARIANT_VIOLATION,
    ExceptionalPrimesError,
)
from exceptional_primes.core.logging import get_logger, setup_logging
from exceptional_primes.models.schemas import ErrorResponse
from exceptional_primes.services.exceptions import ServiceError

logger = get_logger(__name__)

COMMANDS = (analyze, compare, bounds, cheb_lab, gl2_selftest)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exceptional-primes", description=settings.app_description
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    parser.add_argument("--log-level", default=None, help="override EXC_LOG_LEVEL")
    parser.add_argument("--log-file", default=None, help="also log to this file")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def _report_error(
    error: str, detail: Optional[str], module: str, exit_code: int
) -> int:
    """Write the error document to stderr and return the exit code."""
    document = ErrorResponse(error=error, detail=detail, module=module)
    sys.stderr.write(document.model_dump_json() + "\n")
    return exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level, args.log_file)

    try:
        return args.handler(args)
    except ServiceError as exc:
        logger.debug("Service error in %s: %s", exc.module, exc.message)
        return _report_error(exc.message, exc.detail, exc.module, exc.exit_code)
    except ExceptionalPrimesError as exc:
        return _report_error(exc.message, exc.detail, exc.module, exc.exit_code)
    except Exception as exc:
        logger.exception("Unhandled exception", exc_info=exc)
        detail = str(exc) if settings.is_development else None
        return _report_error(
            "Internal error", detail, "cli-reporting", EXIT_INVARIANT_VIOLATION
        )


if __name__ == "__main__":
    sys.exit(main())
