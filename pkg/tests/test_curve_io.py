"""Tests for curve documents, shorthand and override parsing."""

import json

import pytest

from exceptional_primes.core.exceptions import InputError
from exceptional_primes.models.enums import ReductionKind
from exceptional_primes.models.schemas import ConstantsProfile, OverrideSpec
from exceptional_primes.services.curve_io import (
    curve_from_input,
    load_json_model,
    parse_curve_document,
    parse_curve_shorthand,
    parse_override,
    read_curve_argument,
    with_overrides,
)
from exceptional_primes.services.exceptions import CurveInputError
from tests.conftest import AINVS_11A


def test_curve_document_with_overrides():
    doc = parse_curve_document(
        json.dumps(
            {
                "ainvs": [0, 0, 0, -1, 0],
                "overrides": {"2": {"kind": "additive", "exp": 5}},
                "label": "32a2",
            }
        )
    )

    assert doc.ainvs == [0, 0, 0, -1, 0]
    assert doc.overrides[2].kind is ReductionKind.ADDITIVE
    assert doc.overrides[2].exp == 5
    assert doc.label == "32a2"


@pytest.mark.parametrize(
    "text",
    [
        "{not json",
        '{"ainvs": [0, 0, 1, -1]}',
        '{"ainvs": [0, 0, 1, -1, 0], "colour": "blue"}',
        '{"ainvs": [0, 0, 1, -1, 0], "overrides": {"1": {"kind": "good", "exp": 0}}}',
        '{"ainvs": [0, 0, 1, -1, 0], "overrides": {"2": {"kind": "good", "exp": -1}}}',
    ],
)
def test_bad_curve_documents(text):
    with pytest.raises(CurveInputError) as excinfo:
        parse_curve_document(text)
    assert excinfo.value.module == "curve-model"


def test_shorthand():
    assert parse_curve_shorthand("0,-1,1,-10,-20").ainvs == list(AINVS_11A)
    assert parse_curve_shorthand("[0, 0, 1, -1, 0]").ainvs == [0, 0, 1, -1, 0]
    with pytest.raises(CurveInputError):
        parse_curve_shorthand("0,0,1,-1")
    with pytest.raises(CurveInputError):
        parse_curve_shorthand("0,0,x,-1,0")


def test_read_curve_argument(tmp_path):
    path = tmp_path / "curve.json"
    path.write_text('{"ainvs": [0, 0, 1, -1, 0], "label": "37a1"}', encoding="utf-8")

    assert read_curve_argument(str(path)).label == "37a1"
    assert read_curve_argument('{"ainvs": [0, 0, 1, -1, 0]}').ainvs == [0, 0, 1, -1, 0]
    assert read_curve_argument("0,0,1,-1,0").label is None
    with pytest.raises(CurveInputError):
        read_curve_argument(str(tmp_path / "missing.json"))


@pytest.mark.parametrize(
    "text, p, kind, exp",
    [
        ("2:additive:4", 2, ReductionKind.ADDITIVE, 4),
        ("3:split:1", 3, ReductionKind.MULTIPLICATIVE_SPLIT, 1),
        ("5:nonsplit:1", 5, ReductionKind.MULTIPLICATIVE_NONSPLIT, 1),
        ("3:Good:0", 3, ReductionKind.GOOD, 0),
    ],
)
def test_parse_override(text, p, kind, exp):
    prime, spec = parse_override(text)

    assert prime == p
    assert spec.kind is kind
    assert spec.exp == exp


@pytest.mark.parametrize(
    "text", ["2:additive", "two:additive:4", "2:bumpy:1", "2:good:-1"]
)
def test_bad_overrides(text):
    with pytest.raises(CurveInputError):
        parse_override(text)


def test_with_overrides_merges():
    base = parse_curve_document(
        '{"ainvs": [0, 0, 0, -1, 0], "overrides": {"2": {"kind": "additive", "exp": 4}}}'
    )

    extra = {
        2: OverrideSpec(kind="additive", exp=5),
        3: OverrideSpec(kind="good", exp=0),
    }

    merged = with_overrides(base, extra)

    assert merged.overrides[2].exp == 5
    assert merged.overrides[3].kind is ReductionKind.GOOD
    assert base.overrides[2].exp == 4
    assert with_overrides(base, {}) is base


def test_curve_from_input():
    doc = parse_curve_document(
        '{"ainvs": [0, 0, 0, -1, 0], "overrides": {"2": {"kind": "additive", "exp": 5}}}'
    )

    curve, overrides = curve_from_input(doc)

    assert curve.ainvs == (0, 0, 0, -1, 0)
    assert overrides[2].kind is ReductionKind.ADDITIVE
    assert overrides[2].exponent == 5


def test_load_json_model(tmp_path):
    good = tmp_path / "profile.json"
    good.write_text(
        '{"c_eff_single": 2.0, "redone_single_exponent": 6}', encoding="utf-8"
    )
    bad = tmp_path / "bad.json"
    bad.write_text('{"redone_single_exponent": 4}', encoding="utf-8")

    profile = load_json_model(str(good), ConstantsProfile, "constants profile")

    assert profile.c_eff_single == 2.0
    assert profile.redone_single_exponent == 6
    with pytest.raises(InputError):
        load_json_model(str(bad), ConstantsProfile, "constants profile")
    with pytest.raises(InputError):
        load_json_model(
            str(tmp_path / "absent.json"), ConstantsProfile, "constants profile"
        )
