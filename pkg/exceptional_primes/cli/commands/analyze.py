"""`analyze`: exceptional-prime analysis of one curve."""

from __future__ import annotations

import argparse

from exceptional_primes.cli.commands.common import (
    add_output_args,
    add_override_args,
    emit,
    load_profile,
    overrides_from_args,
    parse_int_list,
    validated,
)
from exceptional_primes.cli.dependencies import get_analysis_service
from exceptional_primes.cli.render import render_analysis
from exceptional_primes.core.config import settings
from exceptional_primes.core.exceptions import EXIT_OK
from exceptional_primes.models.schemas import AnalysisConfig
from exceptional_primes.services.curve_io import read_curve_argument, with_overrides


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "analyze",
        help="classify mod-ell images and compare candidates with the bound ladder",
    )
    parser.add_argument(
        "--curve",
        required=True,
        help="curve JSON file, inline JSON, or a1,a2,a3,a4,a6",
    )
    add_override_args(parser)
    parser.add_argument("--label", help="label echoed in the report")
    parser.add_argument("--trace-bound", type=int, default=settings.trace_bound)
    parser.add_argument(
        "--scan-bound", type=int, default=None, help="largest ell to classify"
    )
    parser.add_argument("--profile", help="constants profile JSON")
    parser.add_argument(
        "--v-basis", help="comma-separated discriminants spanning a character space"
    )
    parser.add_argument("--jobs", type=int, default=settings.jobs)
    add_output_args(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    curve_input = with_overrides(
        read_curve_argument(args.curve), overrides_from_args(args)
    )
    if args.label:
        curve_input = curve_input.model_copy(update={"label": args.label})
    config = validated(
        AnalysisConfig,
        "analysis configuration",
        curve=curve_input,
        trace_bound=args.trace_bound,
        scan_bound=args.scan_bound,
        profile=load_profile(args.profile),
        profile_path=args.profile,
        v_basis=parse_int_list(args.v_basis, "--v-basis"),
        output_format=args.format,
        jobs=args.jobs,
    )
    report = get_analysis_service().analyze(config)
    emit(args, report, render_analysis)
    return EXIT_OK
