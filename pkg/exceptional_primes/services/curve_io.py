"""Reading curve documents, overrides and JSON configs."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Type, TypeVar

from pydantic import BaseModel, ValidationError

from exceptional_primes.core.exceptions import InputError
from exceptional_primes.models.enums import ReductionKind
from exceptional_primes.models.schemas import CurveInput, OverrideSpec
from exceptional_primes.services.curve_model import (
    CurveQ,
    ReductionOverride,
    build_curve,
)
from exceptional_primes.services.exceptions import CurveInputError

Model = TypeVar("Model", bound=BaseModel)


def _validation_detail(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        where = ".".join(str(loc) for loc in err["loc"]) or "<root>"
        parts.append(f"field {where}: {err['msg']}")
    return "; ".join(parts)


def _decode_json(text: str, source: str) -> object:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CurveInputError(
            f"malformed JSON in {source}",
            detail=f"line {exc.lineno} column {exc.colno}: {exc.msg}",
        ) from None


def parse_curve_document(text: str, source: str = "curve document") -> CurveInput:
    data = _decode_json(text, source)
    try:
        return CurveInput.model_validate(data)
    except ValidationError as exc:
        raise CurveInputError(
            f"invalid {source}", detail=_validation_detail(exc)
        ) from None


def parse_curve_shorthand(text: str) -> CurveInput:
    """'a1,a2,a3,a4,a6', optionally in brackets."""
    body = text.strip().strip("[]")
    pieces = [p.strip() for p in body.split(",")]
    if len(pieces) != 5:
        raise CurveInputError(
            f"curve shorthand {text!r} needs five a-invariants",
            detail="expected a1,a2,a3,a4,a6",
        )
    try:
        ainvs = [int(p) for p in pieces]
    except ValueError:
        raise CurveInputError(
            f"curve shorthand {text!r} has a non-integer entry"
        ) from None
    return CurveInput(ainvs=ainvs)


def read_curve_argument(value: str) -> CurveInput:
    """A curve given as a JSON file path, inline JSON, or the CSV shorthand."""
    path = Path(value)
    if value.strip().startswith("{"):
        return parse_curve_document(value, "inline curve JSON")
    if path.suffix == ".json" or path.is_file():
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise CurveInputError(
                f"cannot read curve file {value}", detail=str(exc)
            ) from None
        return parse_curve_document(text, str(path))
    return parse_curve_shorthand(value)


def parse_override(text: str) -> tuple[int, OverrideSpec]:
    """'p:kind:exp', e.g. '2:additive:4' or '3:split:1'."""
    pieces = text.split(":")
    if len(pieces) != 3:
        raise CurveInputError(f"override {text!r} must look like p:kind:exp")
    p_text, kind, exp_text = pieces
    try:
        p, exp = int(p_text), int(exp_text)
    except ValueError:
        raise CurveInputError(
            f"override {text!r} has a non-integer prime or exponent"
        ) from None
    try:
        return p, OverrideSpec(kind=kind, exp=exp)
    except ValidationError as exc:
        raise CurveInputError(
            f"invalid override {text!r}", detail=_validation_detail(exc)
        ) from None


def with_overrides(
    curve_input: CurveInput, extra: dict[int, OverrideSpec]
) -> CurveInput:
    if not extra:
        return curve_input
    merged = {**curve_input.overrides, **extra}
    return curve_input.model_copy(update={"overrides": merged})


def curve_from_input(
    curve_input: CurveInput,
) -> tuple[CurveQ, dict[int, ReductionOverride]]:
    curve = build_curve(*curve_input.ainvs)
    overrides = {
        p: ReductionOverride(ReductionKind(spec.kind), spec.exp)
        for p, spec in sorted(curve_input.overrides.items())
    }
    return curve, overrides


def load_json_model(path: str, model: Type[Model], what: str) -> Model:
    """Read and validate a JSON config file; any failure is an input error."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {what} {path}", detail=str(exc)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"malformed JSON in {what} {path}",
            detail=f"line {exc.lineno} column {exc.colno}: {exc.msg}",
        ) from None
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        raise InputError(
            f"invalid {what} {path}", detail=_validation_detail(exc)
        ) from None
