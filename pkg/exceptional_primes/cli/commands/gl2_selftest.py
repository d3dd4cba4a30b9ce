"""`gl2-selftest`: exhaustive classifier oracle over small ell."""

from __future__ import annotations

import argparse

from exceptional_primes.cli.commands.common import add_output_args, emit, parse_int_list
from exceptional_primes.cli.render import render_selftest
from exceptional_primes.core.exceptions import EXIT_INVARIANT_VIOLATION, EXIT_OK
from exceptional_primes.core.logging import get_logger
from exceptional_primes.services.selftest_service import DEFAULT_ELLS, run_selftest

logger = get_logger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "gl2-selftest", help="check the classifier against every GL2 lab family"
    )
    parser.add_argument(
        "--ells",
        default=",".join(str(ell) for ell in DEFAULT_ELLS),
        help="comma-separated odd primes (default: 5,7,11,13)",
    )
    add_output_args(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    report = run_selftest(parse_int_list(args.ells, "--ells"))
    emit(args, report, render_selftest)
    if not report.passed:
        logger.error("GL2 self-test failed")
        return EXIT_INVARIANT_VIOLATION
    return EXIT_OK
