"""Conversion of engine results into report payload models."""

from __future__ import annotations

from typing import Optional, Sequence

from exceptional_primes.core.build_info import load_build_info
from exceptional_primes.models.schemas import (
    CertificatePayload,
    CharacterSearchPayload,
    CurvePayload,
    DistinguishingPayload,
    ImageEntryPayload,
    ImageReportPayload,
    ReductionEntryPayload,
    ReductionProfilePayload,
    ToolInfo,
    TraceTableSummary,
    VExceptionalPayload,
    WitnessPayload,
)
from exceptional_primes.services.curve_model import CurveQ, ReductionProfile
from exceptional_primes.services.frobenius_engine import (
    CongruenceCertificate,
    DistinguishingResult,
    TraceTable,
)
from exceptional_primes.services.image_classifier import (
    CharacterSearch,
    ImageEntry,
    ImageReport,
    VExceptionalGroups,
    WitnessSet,
)


def tool_info() -> ToolInfo:
    return ToolInfo(**load_build_info().as_dict())


def curve_payload(curve: CurveQ, label: Optional[str] = None) -> CurvePayload:
    return CurvePayload(
        ainvs=list(curve.ainvs),
        curve_id=curve.curve_id,
        label=label,
        b2=curve.b2,
        b4=curve.b4,
        b6=curve.b6,
        b8=curve.b8,
        c4=curve.c4,
        c6=curve.c6,
        disc=curve.disc,
        j_num=curve.j_num,
        j_den=curve.j_den,
        j=f"{curve.j_num}/{curve.j_den}",
    )


def reduction_payload(profile: ReductionProfile) -> ReductionProfilePayload:
    return ReductionProfilePayload(
        entries=[
            ReductionEntryPayload(
                p=e.p,
                kind=e.kind,
                conductor_exponent=e.conductor_exponent,
                source=e.source,
            )
            for e in profile.entries
        ],
        N_E=profile.N_E,
        a_E=profile.a_E,
    )


def table_summary(table: TraceTable) -> TraceTableSummary:
    return TraceTableSummary(
        bound=table.bound,
        good_primes=len(table),
        bad_primes=sorted(table.bad_primes),
        skipped_primes=sorted(table.skipped_primes),
    )


def witness_payload(w: WitnessSet) -> WitnessPayload:
    return WitnessPayload(
        sampled=w.sampled,
        w_irred=w.w_irred,
        w_split=w.w_split,
        w_bigorder=w.w_bigorder,
        zero_trace_primes=w.zero_trace_primes,
        zero_trace_fraction=f"{w.zero_trace_fraction:.6f}",
        det_surjective=w.det_surjective,
        nonsquare_disc_count=w.nonsquare_disc_count,
        order_classes=list(w.order_classes),
    )


def _search_payload(
    search: Optional[CharacterSearch],
) -> Optional[CharacterSearchPayload]:
    if search is None:
        return None
    return CharacterSearchPayload(
        searched=list(search.searched),
        matches=list(search.matches),
        insufficient=list(search.insufficient),
        ambiguous=search.ambiguous,
    )


def image_entry_payload(entry: ImageEntry) -> ImageEntryPayload:
    return ImageEntryPayload(
        ell=entry.ell,
        verdict=entry.verdict,
        witnesses=witness_payload(entry.witnesses),
        character=entry.character,
        character_search=_search_payload(entry.character_search),
        note=entry.note,
    )


def image_report_payload(report: ImageReport, curve: CurveQ) -> ImageReportPayload:
    return ImageReportPayload(
        curve=curve.curve_id,
        scan_bound=report.scan_bound,
        trace_bound=report.trace_bound,
        entries=[image_entry_payload(e) for e in report.entries],
    )


def v_exceptional_payload(
    groups: VExceptionalGroups, basis: Sequence[int]
) -> VExceptionalPayload:
    return VExceptionalPayload(
        basis=list(basis),
        span=list(groups.span),
        groups={str(d): ells for d, ells in groups.groups.items()},
        not_in_span=[[ell, d] for ell, d in groups.not_in_span],
    )


def certificate_payload(cert: CongruenceCertificate) -> CertificatePayload:
    return CertificatePayload(
        p=cert.p,
        mode=cert.mode,
        difference=cert.difference,
        bound=cert.bound_text,
        clause=cert.clause,
    )


def distinguishing_payload(
    result: DistinguishingResult, cert: Optional[CongruenceCertificate] = None
) -> DistinguishingPayload:
    return DistinguishingPayload(
        mode=result.mode,
        bound=result.bound,
        compared_primes=result.compared,
        found=result.found,
        prime=result.prime,
        difference=result.difference,
        certificate=certificate_payload(cert) if cert is not None else None,
    )
