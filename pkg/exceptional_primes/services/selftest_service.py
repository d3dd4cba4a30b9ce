"""GL2 lab self-test: classifier against exact subgroup families."""

from __future__ import annotations

import itertools
from typing import Sequence

from exceptional_primes.core.logging import get_logger
from exceptional_primes.models.schemas import (
    Gl2SelftestReport,
    OracleCheckPayload,
    ProjectiveOrderCheck,
)
from exceptional_primes.services.gl2_lab import (
    Mat2,
    order_class,
    projective_order_of_trace,
)
from exceptional_primes.services.oracle_streams import OracleCheck, exhaustive_oracle
from exceptional_primes.services.report_builder import tool_info

logger = get_logger(__name__)

DEFAULT_ELLS = (5, 7, 11, 13)
PROJECTIVE_ORDER_ELLS = (5, 7)


def projective_order_check(ell: int) -> ProjectiveOrderCheck:
    """Compare the (trace, det) fingerprint with the true order on all of GL2."""
    count = mismatches = 0
    for a, b, c, d in itertools.product(range(ell), repeat=4):
        if (a * d - b * c) % ell == 0:
            continue
        m = Mat2(a, b, c, d, ell)
        count += 1
        if projective_order_of_trace(m.trace, m.det, ell) is not order_class(
            m.projective_order(), ell
        ):
            mismatches += 1
    return ProjectiveOrderCheck(ell=ell, elements=count, mismatches=mismatches)


def _check_payload(check: OracleCheck) -> OracleCheckPayload:
    return OracleCheckPayload(
        ell=check.ell,
        family=check.family.value,
        order=check.order,
        subgroup_tag=check.subgroup_tag,
        expected_tag=check.expected_tag,
        verdict=check.verdict,
        character=check.character,
        passed=check.passed,
    )


def run_selftest(ells: Sequence[int] = DEFAULT_ELLS) -> Gl2SelftestReport:
    checks = [_check_payload(c) for c in exhaustive_oracle(ells)]
    orders = [
        projective_order_check(ell) for ell in PROJECTIVE_ORDER_ELLS if ell in ells
    ]
    passed = all(c.passed for c in checks) and all(o.mismatches == 0 for o in orders)
    logger.info(
        "GL2 self-test over ell in %s: %d family checks, %s",
        list(ells),
        len(checks),
        "passed" if passed else "FAILED",
    )
    return Gl2SelftestReport(
        tool=tool_info(),
        ells=list(ells),
        checks=checks,
        projective_order_checks=orders,
        passed=passed,
    )
