"""`cheb-lab`: least primes in Frobenius classes of abelian fields."""

from __future__ import annotations

import argparse
import io
import math

from exceptional_primes.cli.commands.common import write_text
from exceptional_primes.core.config import settings
from exceptional_primes.core.exceptions import EXIT_OK, InputError
from exceptional_primes.core.logging import get_logger
from exceptional_primes.models.enums import LogDiscMode
from exceptional_primes.models.schemas import EnvelopePayload
from exceptional_primes.services.chebotarev_lab import (
    CSV_HEADER,
    CYCLOTOMIC_CSV_HEADER,
    EnvelopeReport,
    envelope_report,
    least_prime_cyclotomic,
    quadratic_sweep,
    write_csv,
)

logger = get_logger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("cheb-lab", help="least-prime sweeps (CSV)")
    parser.add_argument(
        "--quadratic-range",
        type=int,
        default=settings.cheb_quadratic_range,
        help="sweep fundamental discriminants with |D| <= this",
    )
    parser.add_argument("--sieve-bound", type=int, default=settings.cheb_sieve_bound)
    parser.add_argument(
        "--cyclotomic",
        type=int,
        metavar="M",
        help="instead, every residue class coprime to M in Q(zeta_M)",
    )
    parser.add_argument(
        "--log-disc",
        choices=[m.value for m in LogDiscMode],
        default=LogDiscMode.PROXY.value,
        help="cyclotomic log-discriminant: phi(m) log m proxy or exact",
    )
    parser.add_argument("--envelope-out", help="write the envelope summary JSON here")
    parser.add_argument("--jobs", type=int, default=settings.jobs)
    parser.add_argument("--output", help="write the CSV here instead of stdout")
    parser.set_defaults(handler=run)


def envelope_payload(report: EnvelopeReport) -> EnvelopePayload:
    return EnvelopePayload(
        label=report.label,
        count=report.count,
        max_ratio=f"{report.max_ratio:.6f}",
        worst_field=report.worst.field_id,
        worst_target=report.worst.target,
        worst_prime=report.worst.least_prime,
        percentiles={str(q): f"{v:.6f}" for q, v in report.percentiles.items()},
    )


def run(args: argparse.Namespace) -> int:
    if args.sieve_bound < 2:
        raise InputError(f"--sieve-bound must be at least 2, got {args.sieve_bound}")
    if args.cyclotomic is not None:
        m = args.cyclotomic
        if m < 3:
            raise InputError(f"--cyclotomic needs M >= 3, got {m}")
        mode = LogDiscMode(args.log_disc)
        data = [
            least_prime_cyclotomic(m, r, args.sieve_bound, mode)
            for r in range(1, m)
            if math.gcd(r, m) == 1
        ]
    else:
        data = quadratic_sweep(
            args.quadratic_range, args.sieve_bound, max(1, args.jobs)
        )

    buffer = io.StringIO()
    header = CYCLOTOMIC_CSV_HEADER if args.cyclotomic is not None else CSV_HEADER
    write_csv(data, buffer, header)
    write_text(buffer.getvalue(), args.output)

    envelope = envelope_report(data)
    logger.info(
        "Envelope (empirical): %d data, max ratio %.6f at %s/%s",
        envelope.count,
        envelope.max_ratio,
        envelope.worst.field_id,
        envelope.worst.target,
    )
    if args.envelope_out:
        payload = envelope_payload(envelope).model_dump_json(indent=2)
        write_text(payload + "\n", args.envelope_out)
    return EXIT_OK
