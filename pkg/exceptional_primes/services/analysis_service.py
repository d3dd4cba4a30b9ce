"""Full exceptional-prime analysis of one curve."""

from __future__ import annotations

import math
from typing import Optional

import mpmath as mp

from exceptional_primes.core.config import settings
from exceptional_primes.core.logging import get_logger
from exceptional_primes.models.schemas import (
    AnalysisConfig,
    AnalysisReport,
    BoundComparison,
    BoundsRequest,
    CandidatePayload,
    ComparisonVerdicts,
    ConstantsProfile,
    FieldInvariants,
)
from exceptional_primes.services.arithmetic import primes_in_range
from exceptional_primes.services.bound_calculus import effective_bounds, format_value
from exceptional_primes.services.bounds_service import BoundLadder, BoundsService
from exceptional_primes.services.curve_io import curve_from_input
from exceptional_primes.services.curve_model import reduction_profile
from exceptional_primes.services.frobenius_engine import FrobeniusEngine
from exceptional_primes.services.image_classifier import (
    ImageEntry,
    build_image_report,
    v_exceptional_bookkeeping,
)
from exceptional_primes.services.report_builder import (
    curve_payload,
    image_report_payload,
    reduction_payload,
    table_summary,
    tool_info,
    v_exceptional_payload,
)

logger = get_logger(__name__)

SINGLE_BOUNDS = ("effective_single", "explicit_single")
PRODUCT_BOUNDS = ("effective_product", "explicit_product")


def resolve_scan_bound(
    requested: Optional[int], trace_bound: int, N_E: int, profile: ConstantsProfile
) -> tuple[int, list[str]]:
    """Largest ell to classify, and any warnings about how it was chosen."""
    warnings: list[str] = []
    if requested is not None:
        scan = requested
    else:
        single = effective_bounds(N_E, 0, profile).single
        scan = max(settings.scan_bound_floor, int(mp.ceil(single)))
    if scan > trace_bound:
        warnings.append(
            f"scan bound {scan} exceeds the trace bound {trace_bound}; "
            f"clipped to {trace_bound}"
        )
        logger.warning(warnings[-1])
        scan = trace_bound
    return scan, warnings


def _leq(quantity: int, bound) -> bool:
    if isinstance(bound, int):
        return quantity <= bound
    with mp.workdps(settings.bound_precision_digits):
        return mp.mpf(quantity) <= bound


def compare_with_bounds(
    candidates: list[ImageEntry], ladder: BoundLadder
) -> ComparisonVerdicts:
    product = math.prod(e.ell for e in candidates)
    single = [
        BoundComparison(
            bound_id=key,
            bound_value=format_value(ladder.value(key)),
            quantity=str(e.ell),
            holds=_leq(e.ell, ladder.value(key)),
        )
        for e in candidates
        for key in SINGLE_BOUNDS
    ]
    products = [
        BoundComparison(
            bound_id=key,
            bound_value=format_value(ladder.value(key)),
            quantity=str(product),
            holds=_leq(product, ladder.value(key)),
        )
        for key in PRODUCT_BOUNDS
    ]
    return ComparisonVerdicts(
        candidates=[
            CandidatePayload(ell=e.ell, verdict=e.verdict, character=e.character)
            for e in candidates
        ],
        candidate_product=str(product),
        single=single,
        product=products,
    )


class AnalysisService:
    """Curve -> reduction -> traces -> image report -> bound ladder."""

    def __init__(self, engine: FrobeniusEngine):
        self.engine = engine

    def analyze(self, config: AnalysisConfig) -> AnalysisReport:
        curve, overrides = curve_from_input(config.curve)
        profile = reduction_profile(curve, overrides)
        constants = config.profile

        scan, warnings = resolve_scan_bound(
            config.scan_bound, config.trace_bound, profile.N_E, constants
        )
        logger.info(
            "Analyzing %s: N_E=%d a_E=%d, traces to %d, ell to %d",
            curve,
            profile.N_E,
            profile.a_E,
            config.trace_bound,
            scan,
        )

        table = self.engine.build_table(curve, config.trace_bound, profile, config.jobs)
        image = build_image_report(
            table, primes_in_range(2, scan), profile.additive_primes, scan, config.jobs
        )
        candidates = list(image.candidates)

        v_payload = None
        if config.v_basis:
            groups = v_exceptional_bookkeeping(image.entries, config.v_basis)
            v_payload = v_exceptional_payload(groups, config.v_basis)

        bounds, ladder = BoundsService(constants).build_report(
            BoundsRequest(
                invariants=FieldInvariants(), N_E=profile.N_E, a_E=profile.a_E
            ),
            boot_set=[e.ell for e in candidates],
            extra_warnings=warnings,
        )

        return AnalysisReport(
            tool=tool_info(),
            curve=curve_payload(curve, config.curve.label),
            reduction=reduction_payload(profile),
            trace_table=table_summary(table),
            image=image_report_payload(image, curve),
            v_exceptional=v_payload,
            bounds=bounds,
            verdicts=compare_with_bounds(candidates, ladder),
        )
