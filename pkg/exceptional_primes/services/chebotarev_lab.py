"""Least primes in Frobenius classes of abelian extensions of Q.

Quadratic fields are read through the Kronecker symbol, cyclotomic fields
through residues mod m. The envelope report compares least primes with
(log disc)^2 empirically; nothing here proves anything.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence, TextIO, Union

import numpy as np
from sympy import factorint

from exceptional_primes.core.config import settings
from exceptional_primes.core.exceptions import InputError, InvariantViolation
from exceptional_primes.core.logging import get_logger
from exceptional_primes.models.enums import ChebotarevTarget, LogDiscMode
from exceptional_primes.services.arithmetic import (
    euler_phi,
    fundamental_discriminants,
    is_fundamental_discriminant,
    kronecker,
    primes_up_to,
)
from exceptional_primes.services.exceptions import EmptyData, NotFoundWithinBound

logger = get_logger(__name__)

CSV_HEADER = ("D", "target", "least_prime", "ratio")
CYCLOTOMIC_CSV_HEADER = ("m", "residue", "least_prime", "ratio")
PERCENTILES = (50, 90, 99)

_KRONECKER_VALUE = {ChebotarevTarget.INERT: -1, ChebotarevTarget.SPLIT: 1}


@dataclass(frozen=True)
class LeastPrimeDatum:
    field_id: int
    target: str
    least_prime: int
    log_disc: float

    @property
    def ratio(self) -> float:
        return self.least_prime / self.log_disc**2

    def csv_row(self) -> tuple[str, str, str, str]:
        return (
            str(self.field_id),
            self.target,
            str(self.least_prime),
            f"{self.ratio:.6f}",
        )


@lru_cache(maxsize=4)
def _prime_list(bound: int) -> tuple[int, ...]:
    return tuple(int(p) for p in primes_up_to(bound))


def _as_target(target: Union[int, str, ChebotarevTarget]) -> ChebotarevTarget:
    if isinstance(target, ChebotarevTarget):
        return target
    if target in (-1, 1):
        return ChebotarevTarget.INERT if target == -1 else ChebotarevTarget.SPLIT
    try:
        return ChebotarevTarget(target)
    except ValueError:
        raise InputError(
            f"unknown target {target!r}; expected inert, split, -1 or 1",
            module="chebotarev-lab",
        ) from None


def _least_prime(
    condition: Callable[[int], bool],
    unramified: Callable[[int], bool],
    sieve_bound: int,
) -> Optional[int]:
    for p in _prime_list(sieve_bound):
        if unramified(p) and condition(p):
            return p
    return None


def _rescan(
    least: int,
    condition: Callable[[int], bool],
    unramified: Callable[[int], bool],
    label: str,
) -> None:
    for p in _prime_list(least - 1):
        if unramified(p) and condition(p):
            raise InvariantViolation(
                f"{label}: p={p} < {least} already satisfies the target",
                module="chebotarev-lab",
            )
    if not condition(least):
        raise InvariantViolation(
            f"{label}: least prime {least} fails the target", module="chebotarev-lab"
        )


def least_prime_quadratic(
    D: int,
    target: Union[int, str, ChebotarevTarget],
    sieve_bound: Optional[int] = None,
) -> LeastPrimeDatum:
    """Least p not dividing D with Kronecker(D, p) equal to the target."""
    if D == 1 or not is_fundamental_discriminant(D):
        raise InputError(
            f"{D} is not a nontrivial fundamental discriminant",
            module="chebotarev-lab",
        )
    goal = _as_target(target)
    sieve_bound = sieve_bound or settings.cheb_sieve_bound
    value = _KRONECKER_VALUE[goal]

    def condition(p: int) -> bool:
        return kronecker(D, p) == value

    def unramified(p: int) -> bool:
        return D % p != 0

    least = _least_prime(condition, unramified, sieve_bound)
    if least is None:
        raise NotFoundWithinBound(
            f"no {goal.value} prime for D={D} below {sieve_bound}",
            detail="raise --sieve-bound",
        )
    _rescan(least, condition, unramified, f"D={D} {goal.value}")
    return LeastPrimeDatum(D, goal.value, least, math.log(abs(D)))


def cyclotomic_log_disc(m: int, mode: LogDiscMode = LogDiscMode.PROXY) -> float:
    """log |disc Q(zeta_m)|, or its phi(m) log m proxy."""
    phi = euler_phi(m)
    if mode is LogDiscMode.PROXY:
        return phi * math.log(m)
    correction = sum(math.log(q) / (q - 1) for q in factorint(m))
    return phi * (math.log(m) - correction)


def least_prime_cyclotomic(
    m: int,
    r: int,
    sieve_bound: Optional[int] = None,
    mode: LogDiscMode = LogDiscMode.PROXY,
) -> LeastPrimeDatum:
    if m < 3:
        raise InputError(f"conductor m={m} must be >= 3", module="chebotarev-lab")
    if math.gcd(r, m) != 1:
        raise InputError(f"residue {r} is not coprime to {m}", module="chebotarev-lab")
    sieve_bound = sieve_bound or settings.cheb_sieve_bound
    residue = r % m

    def condition(p: int) -> bool:
        return p % m == residue

    def unramified(p: int) -> bool:
        return m % p != 0

    least = _least_prime(condition, unramified, sieve_bound)
    if least is None:
        raise NotFoundWithinBound(
            f"no prime = {residue} mod {m} below {sieve_bound}",
            detail="raise --sieve-bound",
        )
    _rescan(least, condition, unramified, f"{residue} mod {m}")
    return LeastPrimeDatum(m, f"{residue} mod {m}", least, cyclotomic_log_disc(m, mode))


@dataclass(frozen=True)
class EnvelopeReport:
    """Empirical fit of least_prime <= c * (log disc)^2."""

    count: int
    max_ratio: float
    worst: LeastPrimeDatum
    percentiles: dict[int, float]
    label: str = "empirical"


def envelope_report(data: Sequence[LeastPrimeDatum]) -> EnvelopeReport:
    if not data:
        raise EmptyData("envelope report needs at least one datum")
    ratios = np.array([d.ratio for d in data], dtype=np.float64)
    worst = int(np.argmax(ratios))
    return EnvelopeReport(
        count=len(data),
        max_ratio=float(ratios[worst]),
        worst=data[worst],
        percentiles={q: float(np.percentile(ratios, q)) for q in PERCENTILES},
    )


def _sweep_part(discs: Sequence[int], sieve_bound: int) -> list[LeastPrimeDatum]:
    return [
        least_prime_quadratic(D, target, sieve_bound)
        for D in discs
        for target in (ChebotarevTarget.INERT, ChebotarevTarget.SPLIT)
    ]


def _sweep_key(datum: LeastPrimeDatum) -> tuple[int, int, int]:
    inert_last = datum.target != ChebotarevTarget.INERT.value
    return (abs(datum.field_id), datum.field_id, inert_last)


def quadratic_sweep(
    limit: Optional[int] = None, sieve_bound: Optional[int] = None, jobs: int = 1
) -> list[LeastPrimeDatum]:
    """Least inert and split primes for every fundamental |D| <= limit."""
    limit = limit or settings.cheb_quadratic_range
    sieve_bound = sieve_bound or settings.cheb_sieve_bound
    discs = fundamental_discriminants(limit)
    jobs = max(1, jobs)
    logger.info(
        "Quadratic sweep: %d discriminants up to %d, sieve bound %d, %d job(s)",
        len(discs),
        limit,
        sieve_bound,
        jobs,
    )
    _prime_list(sieve_bound)
    if jobs == 1:
        data = _sweep_part(discs, sieve_bound)
    else:
        data = []
        parts = [discs[i::jobs] for i in range(jobs)]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(lambda chunk: _sweep_part(chunk, sieve_bound), parts):
                data.extend(part)
    data.sort(key=_sweep_key)
    return data


def write_csv(
    data: Iterable[LeastPrimeDatum], stream: TextIO, header: Sequence[str] = CSV_HEADER
) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for datum in data:
        writer.writerow(datum.csv_row())
