"""`compare`: first prime where two curves' Frobenius data differ."""

from __future__ import annotations

import argparse

from exceptional_primes.cli.commands.common import add_output_args, emit
from exceptional_primes.cli.dependencies import get_compare_service
from exceptional_primes.cli.render import render_compare
from exceptional_primes.core.config import settings
from exceptional_primes.core.exceptions import EXIT_OK, InputError
from exceptional_primes.services.compare_service import parse_modes
from exceptional_primes.services.curve_io import read_curve_argument


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "compare", help="distinguishing prime with a certificate"
    )
    parser.add_argument("--curve-a", required=True)
    parser.add_argument("--curve-b", required=True)
    parser.add_argument("--mode", choices=["plain", "adams12", "both"], default="both")
    parser.add_argument(
        "--bound", type=int, default=1000, help="largest prime compared"
    )
    parser.add_argument("--jobs", type=int, default=settings.jobs)
    add_output_args(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    if args.bound < 2:
        raise InputError(f"--bound must be at least 2, got {args.bound}")
    report = get_compare_service().compare(
        read_curve_argument(args.curve_a),
        read_curve_argument(args.curve_b),
        args.bound,
        parse_modes(args.mode),
        max(1, args.jobs),
    )
    emit(args, report, render_compare)
    return EXIT_OK
