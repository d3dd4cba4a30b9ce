"""Plain-text renderings of report documents."""

from __future__ import annotations

from typing import Iterable, Sequence

from exceptional_primes.models.schemas import (
    AnalysisReport,
    BoundReport,
    CompareReport,
    Gl2SelftestReport,
)


def _table(headers: Sequence[str], rows: Iterable[Sequence[object]]) -> list[str]:
    cells = [[str(c) for c in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = [
        "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells
    ]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return lines


def _profile_lines(report: BoundReport) -> list[str]:
    lines = ["Constants profile:"]
    for name, value in report.profile.model_dump().items():
        lines.append(f"  {name} = {value}")
    lines.extend(f"NOTE: {d}" for d in report.disclaimers)
    lines.extend(f"WARNING: {w}" for w in report.warnings)
    return lines


def render_bounds(report: BoundReport) -> str:
    lines = [
        f"Bound ladder: N_E = {report.N_E}, a_E = {report.a_E}, "
        f"n_K = {report.invariants.n_K}, probe prime p = {report.probe_prime}",
    ]
    lines += _profile_lines(report)
    lines.append("")
    lines += _table(
        ("formula", "value", "bounds"),
        ((e.formula_id, e.value, e.provenance) for e in report.entries),
    )
    boot = report.boot
    lines += [
        "",
        f"Boot check: p = {boot.p}, theta = {boot.theta_p}, sum over S = {boot.rhs}",
        f"  implied bound {boot.implied_p_bound}: holds = {boot.holds}; "
        f"chain applicable = {boot.chain_applicable}, "
        f"chain holds = {boot.chain_holds}, "
        f"premise holds = {boot.premise_holds}",
    ]
    return "\n".join(lines) + "\n"


def render_analysis(report: AnalysisReport) -> str:
    curve = report.curve
    lines = [
        f"Curve [{curve.curve_id}]" + (f" ({curve.label})" if curve.label else ""),
        f"  disc = {curve.disc}, j = {curve.j}",
        f"  N_E = {report.reduction.N_E}, a_E = {report.reduction.a_E}",
    ]
    for e in report.reduction.entries:
        lines.append(
            f"  p = {e.p}: {e.kind.value}, "
            f"f = {e.conductor_exponent} ({e.source.value})"
        )
    table = report.trace_table
    lines.append(
        f"Trace table: {table.good_primes} good primes up to {table.bound}"
        + (f", skipped {table.skipped_primes}" if table.skipped_primes else "")
    )
    lines.append("")
    lines += _table(
        ("ell", "verdict", "w_irred", "w_split", "w_bigorder", "character", "note"),
        (
            (
                e.ell,
                e.verdict.value,
                e.witnesses.w_irred or "-",
                e.witnesses.w_split or "-",
                e.witnesses.w_bigorder or "-",
                e.character if e.character is not None else "-",
                e.note,
            )
            for e in report.image.entries
        ),
    )
    verdicts = report.verdicts
    candidates = [c.ell for c in verdicts.candidates]
    lines += [
        "",
        f"Candidates: {candidates}, product = {verdicts.candidate_product}",
    ]
    for c in verdicts.single + verdicts.product:
        lines.append(f"  {c.quantity} <= {c.bound_id} ({c.bound_value}): {c.holds}")
    lines.append("")
    lines += _profile_lines(report.bounds)
    return "\n".join(lines) + "\n"


def render_compare(report: CompareReport) -> str:
    lines = [
        f"[{report.curve_a.curve_id}] vs [{report.curve_b.curve_id}], "
        f"p <= {report.bound}"
    ]
    for r in report.results:
        if not r.found:
            lines.append(
                f"  {r.mode.value}: no difference over {r.compared_primes} primes"
            )
            continue
        lines.append(
            f"  {r.mode.value}: differ at p = {r.prime}, "
            f"|difference| = {r.difference}"
        )
        if r.certificate is not None:
            lines.append(f"    bound {r.certificate.bound}; {r.certificate.clause}")
    return "\n".join(lines) + "\n"


def render_selftest(report: Gl2SelftestReport) -> str:
    lines = _table(
        ("ell", "family", "order", "tag", "expected", "verdict", "passed"),
        (
            (
                c.ell,
                c.family,
                c.order,
                c.subgroup_tag,
                c.expected_tag,
                c.verdict.value,
                c.passed,
            )
            for c in report.checks
        ),
    )
    for o in report.projective_order_checks:
        lines.append(
            f"projective order fingerprint mod {o.ell}: "
            f"{o.mismatches} mismatches in {o.elements}"
        )
    lines.append("PASSED" if report.passed else "FAILED")
    return "\n".join(lines) + "\n"
