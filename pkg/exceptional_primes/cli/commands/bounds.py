"""`bounds`: evaluate the bound ladder for given field and curve data."""

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
from exceptional_primes.cli.render import render_bounds
from exceptional_primes.core.exceptions import EXIT_OK, InputError
from exceptional_primes.models.schemas import BoundsRequest, FieldInvariants
from exceptional_primes.services.bounds_service import BoundsService
from exceptional_primes.services.curve_io import (
    curve_from_input,
    load_json_model,
    read_curve_argument,
    with_overrides,
)
from exceptional_primes.services.curve_model import reduction_profile


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "bounds", help="evaluate every explicit bound formula"
    )
    parser.add_argument("--invariants", help="field invariants JSON (default: Q)")
    parser.add_argument(
        "--profile", help="constants profile JSON (default: all constants 1)"
    )
    parser.add_argument("--conductor", type=int, help="conductor norm N_E")
    parser.add_argument("--additive", type=int, help="number of additive primes a_E")
    parser.add_argument("--curve", help="derive N_E and a_E from this curve (over Q)")
    add_override_args(parser)
    parser.add_argument(
        "--boot-set", help="comma-separated primes S for the boot check"
    )
    parser.add_argument("--boot-A", dest="boot_A", help="A >= 1 for the boot check")
    parser.add_argument("--boot-b", dest="boot_b", type=float, default=36.0)
    add_output_args(parser)
    parser.set_defaults(handler=run)


def _curve_data(args: argparse.Namespace) -> tuple[int, int]:
    if args.curve is None:
        return (
            1 if args.conductor is None else args.conductor,
            0 if args.additive is None else args.additive,
        )
    if args.conductor is not None or args.additive is not None:
        raise InputError("--curve cannot be combined with --conductor or --additive")
    curve_input = with_overrides(
        read_curve_argument(args.curve), overrides_from_args(args)
    )
    curve, overrides = curve_from_input(curve_input)
    profile = reduction_profile(curve, overrides)
    return profile.N_E, profile.a_E


def run(args: argparse.Namespace) -> int:
    invariants = (
        load_json_model(args.invariants, FieldInvariants, "field invariants")
        if args.invariants
        else FieldInvariants()
    )
    N_E, a_E = _curve_data(args)
    request = validated(
        BoundsRequest,
        "bounds request",
        invariants=invariants,
        N_E=N_E,
        a_E=a_E,
        boot_set=parse_int_list(args.boot_set, "--boot-set"),
        boot_A=args.boot_A,
        boot_b=args.boot_b,
    )
    report, _ = BoundsService(load_profile(args.profile)).build_report(request)
    emit(args, report, render_bounds)
    return EXIT_OK
