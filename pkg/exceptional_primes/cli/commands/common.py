"""Flags and output handling shared by the subcommands."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Optional, TypeVar

from pydantic import BaseModel, ValidationError

from exceptional_primes.core.exceptions import InputError
from exceptional_primes.models.enums import OutputFormat
from exceptional_primes.models.schemas import ConstantsProfile, OverrideSpec
from exceptional_primes.services.curve_io import load_json_model, parse_override

Document = TypeVar("Document", bound=BaseModel)


def add_output_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.JSON.value,
        help="report format (default: json)",
    )
    parser.add_argument("--output", help="write the report here instead of stdout")


def add_override_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="P:KIND:EXP",
        help="reduction override, e.g. 2:additive:4 (repeatable)",
    )


def write_text(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def emit(
    args: argparse.Namespace, document: Document, render: Callable[[Document], str]
) -> None:
    if args.format == OutputFormat.TEXT.value:
        text = render(document)
    else:
        text = document.model_dump_json(indent=2) + "\n"
    write_text(text, args.output)


def parse_int_list(value: Optional[str], what: str) -> list[int]:
    if not value:
        return []
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise InputError(
            f"{what} must be a comma-separated list of integers, got {value!r}"
        ) from None


def overrides_from_args(args: argparse.Namespace) -> dict[int, OverrideSpec]:
    return dict(parse_override(text) for text in args.override)


def load_profile(path: Optional[str]) -> ConstantsProfile:
    if not path:
        return ConstantsProfile()
    return load_json_model(path, ConstantsProfile, "constants profile")


def validated(model: type[Document], what: str, **fields) -> Document:
    """Build a pydantic model from CLI values; validation errors are input errors."""
    try:
        return model(**fields)
    except ValidationError as exc:
        detail = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}"
            for err in exc.errors()
        )
        raise InputError(f"invalid {what}", detail=detail) from None
