"""Tests for the bound ladder and its report."""

import pytest

from exceptional_primes.core.exceptions import InvariantViolation
from exceptional_primes.models.schemas import (
    BoundsRequest,
    ConstantsProfile,
    FieldInvariants,
)
from exceptional_primes.services.bounds_service import (
    DEFAULT_PROFILE_DISCLAIMER,
    LOGLOG_NOTE,
    PROFILE_DISCLAIMER,
    BoundLadder,
    BoundsService,
    default_boot_A,
    vexc_dimensions,
)


@pytest.fixture
def service():
    return BoundsService()


def test_ladder_keys_over_rationals(service):
    ladder, p = service.build_ladder(FieldInvariants(), 37, 0)

    assert p == 53
    for key in (
        "disc_chain",
        "chebotarev",
        "ceb",
        "redone_product",
        "redone_single[e=3]",
        "redone_single[e=6]",
        "frobenius_norm",
        "lmv",
        "lmv_two_rank",
        "vexc[d=1]",
        "vexc[d=2]",
        "vexc_plus_d[d=2]",
        "effective_single",
        "effective_product",
        "effective_product_simplified",
        "ineffective_single",
        "ineffective_product",
        "sk_single",
        "sk_product",
        "explicit_single",
        "explicit_product",
        "lenstra",
    ):
        assert key in ladder, key
    assert "class_group_prime" not in ladder
    assert "vexc[d=3]" not in ladder
    assert ladder.value("lmv") == 4


def test_probe_prime_uses_cube_degree(service):
    ladder, p = service.build_ladder(FieldInvariants(), 11, 0)

    disc_chain = next(e for e in ladder.entries if e.formula_id == "disc_chain")
    assert disc_chain.inputs["d"] == str(53**3)
    assert disc_chain.inputs["N"] == str(53 * 11)


def test_ramified_primes_move_the_probe(service):
    inv = FieldInvariants(n_K=2, h_K=1, abs_disc=53 * 4, ramified_primes=[2, 53])

    ladder, p = service.build_ladder(inv, 11, 0)

    assert p == 59
    assert "class_group_prime" in ladder


def test_vexc_dimensions():
    assert list(vexc_dimensions(0, FieldInvariants())) == [1, 2]
    class_number_four = FieldInvariants(n_K=2, h_K=4, abs_disc=39)
    assert list(vexc_dimensions(1, class_number_four)) == [1, 2, 3, 4, 5, 6, 7]
    class_number_three = FieldInvariants(n_K=2, h_K=3, abs_disc=23)
    assert list(vexc_dimensions(0, class_number_three)) == [1, 2, 3, 4, 5, 6]


def test_report_for_conductor_11(service):
    report, ladder = service.build_report(BoundsRequest(N_E=11, a_E=0))

    assert report.probe_prime == 53
    assert report.loglog_clamped
    assert LOGLOG_NOTE in report.warnings
    assert report.profile_is_default
    assert report.disclaimers == [PROFILE_DISCLAIMER, DEFAULT_PROFILE_DISCLAIMER]
    assert report.boot.p == 53
    assert report.boot.b == "36"
    assert report.entries[-1].formula_id == "boot_implied"
    assert len(report.entries) == len(ladder.entries)


def test_report_for_conductor_37(service):
    report, _ = service.build_report(BoundsRequest(N_E=37, a_E=0))

    assert not report.loglog_clamped
    assert LOGLOG_NOTE not in report.warnings


def test_custom_profile_drops_default_disclaimer():
    report, _ = BoundsService(ConstantsProfile(c_eff_single=2.5)).build_report(
        BoundsRequest(N_E=37)
    )

    assert not report.profile_is_default
    assert report.disclaimers == [PROFILE_DISCLAIMER]


def test_boot_defaults_and_overrides(service):
    request = BoundsRequest(N_E=11, boot_A="2.5", boot_b=1.5)
    report, _ = service.build_report(request, boot_set=[2, 3])

    assert report.boot.A == "2.5"
    assert report.boot.b == "1.5"
    assert report.boot.S == [2, 3]
    assert not report.boot.chain_applicable
    assert default_boot_A(2) == 1
    assert default_boot_A(37) > 1


def test_extra_and_lenstra_warnings(service):
    inconsistent = FieldInvariants(n_K=2, h_K=6, abs_disc=3, ramified_primes=[3])

    report, _ = service.build_report(
        BoundsRequest(invariants=inconsistent, N_E=37), extra_warnings=["scan clipped"]
    )

    assert report.warnings[0] == "scan clipped"
    assert any("exceeds |disc K|^(3/2)" in w for w in report.warnings)


def test_every_entry_recomputes(service):
    report, _ = service.build_report(BoundsRequest(N_E=37, a_E=1))

    for entry in report.entries:
        assert BoundLadder.recompute(entry) is not None
    again, _ = service.build_report(BoundsRequest(N_E=37, a_E=1))
    assert again.model_dump() == report.model_dump()


def test_verify_detects_tampering(service):
    _, ladder = service.build_report(BoundsRequest(N_E=37))
    ladder.entries[0] = ladder.entries[0].model_copy(update={"value": "1"})

    with pytest.raises(InvariantViolation):
        ladder.verify()
