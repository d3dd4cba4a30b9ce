"""Distinguishing primes between two curves, with congruence certificates."""

from __future__ import annotations

from typing import Optional, Sequence

from exceptional_primes.core.logging import get_logger
from exceptional_primes.models.enums import CompareMode
from exceptional_primes.models.schemas import CompareReport, CurveInput
from exceptional_primes.services.curve_io import curve_from_input
from exceptional_primes.services.curve_model import reduction_profile
from exceptional_primes.services.frobenius_engine import (
    FrobeniusEngine,
    compare_traces,
    congruence_certificate,
)
from exceptional_primes.services.report_builder import (
    curve_payload,
    distinguishing_payload,
    tool_info,
)

logger = get_logger(__name__)


class CompareService:
    def __init__(self, engine: FrobeniusEngine):
        self.engine = engine

    def compare(
        self,
        curve_a: CurveInput,
        curve_b: CurveInput,
        bound: int,
        modes: Sequence[CompareMode] = (CompareMode.PLAIN, CompareMode.ADAMS12),
        jobs: int = 1,
    ) -> CompareReport:
        """Smallest common good prime <= bound where the curves differ, per mode."""
        tables = []
        curves = []
        for curve_input in (curve_a, curve_b):
            curve, overrides = curve_from_input(curve_input)
            profile = reduction_profile(curve, overrides)
            tables.append(self.engine.build_table(curve, bound, profile, jobs))
            curves.append(curve)
        table_a, table_b = tables

        results = []
        for mode in modes:
            result = compare_traces(table_a, table_b, mode, bound)
            cert = None
            if result.found:
                cert = congruence_certificate(
                    table_a.record(result.prime), table_b.record(result.prime), mode
                )
            logger.info(
                "Compare %s vs %s (%s): %s",
                curves[0],
                curves[1],
                mode.value,
                f"differ at p={result.prime}" if result.found else "no difference",
            )
            results.append(distinguishing_payload(result, cert))

        return CompareReport(
            tool=tool_info(),
            curve_a=curve_payload(curves[0], curve_a.label),
            curve_b=curve_payload(curves[1], curve_b.label),
            bound=bound,
            results=results,
        )


def parse_modes(value: Optional[str]) -> list[CompareMode]:
    if value is None or value == "both":
        return [CompareMode.PLAIN, CompareMode.ADAMS12]
    return [CompareMode(value)]
