"""Tests for the analysis and compare pipelines."""

import pytest

from exceptional_primes.models.enums import CompareMode, ImageVerdict
from exceptional_primes.models.schemas import (
    AnalysisConfig,
    BoundsRequest,
    ConstantsProfile,
    CurveInput,
    OverrideSpec,
)
from exceptional_primes.services.analysis_service import (
    PRODUCT_BOUNDS,
    SINGLE_BOUNDS,
    AnalysisService,
    compare_with_bounds,
    resolve_scan_bound,
)
from exceptional_primes.services.bounds_service import BoundsService
from exceptional_primes.services.compare_service import CompareService, parse_modes
from exceptional_primes.services.image_classifier import ImageEntry, WitnessSet
from tests.conftest import AINVS_11A, AINVS_37A

# Short model of conductor 37 and its twist by -1.
SHORT_37 = CurveInput(
    ainvs=[0, 0, 0, -1296, 11664],
    overrides={
        2: OverrideSpec(kind="good", exp=0),
        3: OverrideSpec(kind="good", exp=0),
    },
)
TWIST_37 = CurveInput(
    ainvs=[0, 0, 0, -1296, -11664],
    overrides={
        2: OverrideSpec(kind="additive", exp=4),
        3: OverrideSpec(kind="good", exp=0),
    },
)


def test_scan_bound_defaults_to_floor():
    scan, warnings = resolve_scan_bound(None, 10000, 11, ConstantsProfile())

    assert scan == 100
    assert warnings == []


def test_scan_bound_follows_large_constants():
    profile = ConstantsProfile(c_eff_single=1000.0)

    scan, _ = resolve_scan_bound(None, 10000, 37, profile)

    assert scan > 100


def test_scan_bound_is_clipped():
    scan, warnings = resolve_scan_bound(5000, 1000, 37, ConstantsProfile())

    assert scan == 1000
    assert len(warnings) == 1
    assert "clipped to 1000" in warnings[0]


def _entry(ell: int) -> ImageEntry:
    witnesses = WitnessSet(ell, 100, None, 3, None, 10, True)
    return ImageEntry(ell, ImageVerdict.REDUCIBLE_CANDIDATE, witnesses)


def test_compare_with_bounds():
    _, ladder = BoundsService().build_report(BoundsRequest(N_E=11))

    verdicts = compare_with_bounds([_entry(5), _entry(7)], ladder)

    assert verdicts.candidate_product == "35"
    assert [c.ell for c in verdicts.candidates] == [5, 7]
    assert {c.bound_id for c in verdicts.single} == set(SINGLE_BOUNDS)
    assert len(verdicts.single) == 4
    assert {c.bound_id for c in verdicts.product} == set(PRODUCT_BOUNDS)
    effective = [c for c in verdicts.single if c.bound_id == "effective_single"]
    # log 11 ~ 2.4 with log log clamped to 1
    assert [c.holds for c in effective] == [False, False]


def test_empty_candidate_product_is_one():
    _, ladder = BoundsService().build_report(BoundsRequest(N_E=37))

    verdicts = compare_with_bounds([], ladder)

    assert verdicts.candidate_product == "1"
    assert verdicts.single == []
    assert all(c.holds for c in verdicts.product)


def test_analyze_conductor_11(engine):
    config = AnalysisConfig(
        curve=CurveInput(ainvs=list(AINVS_11A), label="11a1"),
        trace_bound=2000,
        scan_bound=60,
    )

    report = AnalysisService(engine).analyze(config)

    assert report.curve.label == "11a1"
    assert report.reduction.N_E == 11
    assert [c.ell for c in report.verdicts.candidates] == [5]
    assert report.image.scan_bound == 60
    assert report.bounds.boot.S == [5]
    assert report.v_exceptional is None


def test_analyze_conductor_37_with_character_space(engine):
    config = AnalysisConfig(
        curve=CurveInput(ainvs=list(AINVS_37A)),
        trace_bound=2000,
        scan_bound=60,
        v_basis=[-4],
    )

    report = AnalysisService(engine).analyze(config)

    assert report.verdicts.candidates == []
    assert report.verdicts.candidate_product == "1"
    assert report.v_exceptional is not None
    assert report.v_exceptional.span == [1, -4]


def test_analysis_is_deterministic(engine):
    config = AnalysisConfig(curve=CurveInput(ainvs=list(AINVS_11A)), trace_bound=500)

    first = AnalysisService(engine).analyze(config)
    second = AnalysisService(engine).analyze(config.model_copy(update={"jobs": 3}))

    assert first.model_dump() == second.model_dump()


def test_compare_reference_curves(engine):
    report = CompareService(engine).compare(
        CurveInput(ainvs=list(AINVS_11A)), CurveInput(ainvs=list(AINVS_37A)), 100
    )

    plain, adams = report.results
    assert (plain.mode, plain.prime, plain.difference) == (CompareMode.PLAIN, 3, 2)
    assert plain.compared_primes == 2
    assert (adams.prime, adams.difference) == (3, 2816)
    assert plain.certificate.clause


def test_compare_twist_pair(engine):
    report = CompareService(engine).compare(SHORT_37, TWIST_37, 200)

    plain, adams = report.results
    assert plain.found
    assert (plain.prime, plain.difference) == (7, 2)
    assert not adams.found
    assert adams.prime is None
    assert adams.certificate is None


@pytest.mark.parametrize(
    "value, modes",
    [
        (None, [CompareMode.PLAIN, CompareMode.ADAMS12]),
        ("both", [CompareMode.PLAIN, CompareMode.ADAMS12]),
        ("plain", [CompareMode.PLAIN]),
        ("adams12", [CompareMode.ADAMS12]),
    ],
)
def test_parse_modes(value, modes):
    assert parse_modes(value) == modes
