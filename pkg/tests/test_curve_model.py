"""Tests for Weierstrass invariants, minimal models and reduction profiles."""

import pytest

from exceptional_primes.models.enums import ReductionKind, ReductionSource
from exceptional_primes.services.arithmetic import primes_in_range, valuation
from exceptional_primes.services.curve_model import (
    ReductionOverride,
    build_curve,
    change_coordinates,
    minimal_model_at,
    reduction_profile,
    scale_model,
    validate_override,
)
from exceptional_primes.services.exceptions import (
    CurveInputError,
    InvalidOverride,
    MissingOverride,
    SingularCurve,
)
from exceptional_primes.services.frobenius_engine import count_points


def test_invariants_of_conductor_11_curve(curve_11a):
    c = curve_11a

    assert (c.b2, c.b4, c.b6, c.b8) == (-4, -20, -79, -21)
    assert (c.c4, c.c6) == (496, 20008)
    assert c.disc == -161051
    assert (c.j_num, c.j_den) == (-122023936, 161051)
    assert c.curve_id == "0,-1,1,-10,-20"
    assert 1728 * c.disc == c.c4**3 - c.c6**2


def test_invariants_of_conductor_37_curve(curve_37a):
    c = curve_37a

    assert (c.b2, c.b4, c.b6, c.b8) == (0, -2, 1, -1)
    assert (c.c4, c.c6, c.disc) == (48, -216, 37)
    assert (c.j_num, c.j_den) == (110592, 37)


def test_singular_model_is_rejected():
    with pytest.raises(SingularCurve):
        build_curve(0, 0, 0, 0, 0)


def test_change_of_coordinates_preserves_j(curve_37a):
    moved = change_coordinates(curve_37a, 1, 1, 1, 1)

    assert moved.ainvs != curve_37a.ainvs
    assert moved.disc == curve_37a.disc
    assert (moved.j_num, moved.j_den) == (curve_37a.j_num, curve_37a.j_den)


def test_scaling_then_unscaling_is_a_plain_translation(curve_37a):
    scaled = scale_model(curve_37a, 5)

    moved = change_coordinates(scaled, 5, 25 * 2, 5 * 1, 125 * 3)

    assert moved == change_coordinates(curve_37a, 1, 2, 1, 3)


def _bad_entries(profile):
    return [
        (e.p, e.kind, e.conductor_exponent)
        for e in profile.entries
        if e.kind is not ReductionKind.GOOD
    ]


@pytest.mark.parametrize("r, s, t", [(2, 1, 3), (-3, 2, -1), (5, 0, 7)])
def test_coordinate_changes_keep_counts_and_reduction(curve_11a, curve_37a, r, s, t):
    for curve in (curve_11a, curve_37a):
        moved = scale_model(change_coordinates(curve, 1, r, s, t), 7)
        before = reduction_profile(curve)
        after = reduction_profile(moved)

        assert (after.N_E, after.a_E) == (before.N_E, before.a_E)
        assert _bad_entries(after) == _bad_entries(before)
        for p in primes_in_range(2, 100):
            if p == 7 or p in before.bad_primes:
                continue
            assert count_points(moved, p).a_p == count_points(curve, p).a_p, p


def test_change_of_coordinates_must_stay_integral(curve_37a):
    with pytest.raises(CurveInputError):
        change_coordinates(curve_37a, 2, 0, 0, 0)


def test_minimal_model_undoes_scaling(curve_37a):
    scaled = scale_model(curve_37a, 5)
    assert valuation(scaled.disc, 5) == 12

    minimal = minimal_model_at(scaled, 5)

    assert minimal.disc == 37
    assert minimal_model_at(curve_37a, 7) == curve_37a


def test_minimal_model_needs_p_at_least_5(curve_37a):
    with pytest.raises(CurveInputError):
        minimal_model_at(curve_37a, 3)


def test_reduction_profile_split_multiplicative(curve_11a):
    profile = reduction_profile(curve_11a)

    assert [(e.p, e.kind, e.conductor_exponent) for e in profile.entries] == [
        (11, ReductionKind.MULTIPLICATIVE_SPLIT, 1)
    ]
    assert (profile.N_E, profile.a_E) == (11, 0)
    assert profile.is_good(7) and not profile.is_good(11)


def test_reduction_profile_nonsplit_multiplicative(curve_37a):
    profile = reduction_profile(curve_37a)

    assert profile.entry(37).kind is ReductionKind.MULTIPLICATIVE_NONSPLIT
    assert profile.entry(37).source is ReductionSource.COMPUTED
    assert profile.N_E == 37


def test_scaled_model_keeps_conductor(curve_37a):
    profile = reduction_profile(scale_model(curve_37a, 5))

    assert profile.N_E == 37
    assert profile.entry(5).kind is ReductionKind.GOOD


def test_primes_two_and_three_need_overrides():
    curve = build_curve(0, 0, 0, -1, 0)

    with pytest.raises(MissingOverride) as excinfo:
        reduction_profile(curve)
    assert excinfo.value.prime == 2

    override = ReductionOverride(ReductionKind.ADDITIVE, 5)
    profile = reduction_profile(curve, {2: override})
    assert (profile.N_E, profile.a_E) == (32, 1)
    assert profile.entry(2).source is ReductionSource.USER_OVERRIDE
    assert profile.additive_primes == frozenset({2})


@pytest.mark.parametrize(
    ("p", "kind", "exp"),
    [
        (5, ReductionKind.ADDITIVE, 3),
        (2, ReductionKind.ADDITIVE, 9),
        (3, ReductionKind.ADDITIVE, 6),
        (3, ReductionKind.MULTIPLICATIVE_SPLIT, 2),
        (7, ReductionKind.GOOD, 1),
    ],
)
def test_invalid_overrides(p, kind, exp):
    with pytest.raises(InvalidOverride):
        validate_override(p, ReductionOverride(kind, exp))


@pytest.mark.parametrize(
    ("p", "kind", "exp"),
    [
        (2, ReductionKind.ADDITIVE, 8),
        (3, ReductionKind.ADDITIVE, 5),
        (5, ReductionKind.ADDITIVE, 2),
        (3, ReductionKind.MULTIPLICATIVE_NONSPLIT, 1),
        (2, ReductionKind.GOOD, 0),
    ],
)
def test_valid_overrides(p, kind, exp):
    validate_override(p, ReductionOverride(kind, exp))
