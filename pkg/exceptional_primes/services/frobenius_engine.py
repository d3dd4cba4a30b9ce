"""Frobenius traces by point counting, Adams operations and trace comparison.

Frobenius polynomials follow the convention x^2 - a x + q with
a = p + 1 - #E(F_p). Downstream code only consumes differences, products
and zero tests, which do not see the sign.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from exceptional_primes.core.config import settings
from exceptional_primes.core.exceptions import InvariantViolation
from exceptional_primes.core.logging import get_logger
from exceptional_primes.models.enums import CompareMode
from exceptional_primes.services.arithmetic import primes_up_to, squares_table
from exceptional_primes.services.curve_model import (
    CurveQ,
    ReductionProfile,
    minimal_model_at,
)
from exceptional_primes.services.exceptions import (
    BadReduction,
    InsufficientTable,
    PrimeMismatch,
    PrimeTooLarge,
    WeilBoundViolation,
)
from exceptional_primes.services.trace_cache import TraceCache

logger = get_logger(__name__)


@dataclass(frozen=True)
class FrobeniusRecord:
    p: int
    a_p: int

    def __post_init__(self) -> None:
        if self.a_p * self.a_p > 4 * self.p:
            raise WeilBoundViolation(
                f"trace {self.a_p} at p={self.p} breaks the Weil bound",
                detail="a_p^2 > 4p",
            )

    @property
    def poly(self) -> "FrobPoly":
        return FrobPoly(self.a_p, self.p)


@dataclass(frozen=True)
class FrobPoly:
    """The pair (a, q) standing for x^2 - a x + q."""

    trace: int
    norm: int

    def __post_init__(self) -> None:
        if self.norm <= 0:
            raise ValueError("Frobenius polynomial needs a positive norm")
        if self.trace * self.trace > 4 * self.norm:
            raise WeilBoundViolation(
                f"polynomial x^2 - {self.trace}x + {self.norm} "
                "has positive discriminant"
            )


@dataclass(frozen=True)
class TraceTable:
    """Traces at good primes up to ``bound``, sorted by p."""

    curve_id: str
    records: tuple[FrobeniusRecord, ...]
    bad_primes: frozenset[int]
    bound: int
    skipped_primes: frozenset[int] = frozenset()
    _index: dict[int, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        previous = 0
        for rec in self.records:
            if rec.p <= previous:
                raise InvariantViolation(
                    "trace table records must be strictly increasing in p",
                    module="frobenius-engine",
                )
            if rec.p in self.bad_primes:
                raise InvariantViolation(
                    f"bad prime {rec.p} in trace table", module="frobenius-engine"
                )
            previous = rec.p
        self._index.update({rec.p: rec.a_p for rec in self.records})

    def __len__(self) -> int:
        return len(self.records)

    def trace(self, p: int) -> Optional[int]:
        return self._index.get(p)

    def record(self, p: int) -> Optional[FrobeniusRecord]:
        a_p = self._index.get(p)
        return None if a_p is None else FrobeniusRecord(p, a_p)

    @property
    def primes(self) -> np.ndarray:
        return np.fromiter(
            (r.p for r in self.records), dtype=np.int64, count=len(self.records)
        )

    @property
    def traces(self) -> np.ndarray:
        return np.fromiter(
            (r.a_p for r in self.records), dtype=np.int64, count=len(self.records)
        )

    def truncated(self, bound: int) -> "TraceTable":
        return TraceTable(
            self.curve_id,
            tuple(r for r in self.records if r.p <= bound),
            self.bad_primes,
            min(bound, self.bound),
            frozenset(p for p in self.skipped_primes if p <= bound),
        )


def naive_point_count(curve: CurveQ, p: int) -> int:
    """#E(F_p) by trying every (x, y); the point at infinity included."""
    a1, a2, a3, a4, a6 = (a % p for a in curve.ainvs)
    count = 1
    for x in range(p):
        rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - rhs) % p == 0:
                count += 1
    return count


def _character_sum(curve: CurveQ, p: int) -> int:
    """Sum over x in F_p of chi((a1 x + a3)^2 + 4 f(x)) for odd p."""
    a1, a2, a3, a4, a6 = (a % p for a in curve.ainvs)
    x = np.arange(p, dtype=np.int64)
    f = (x + a2) % p
    f = (f * x + a4) % p
    f = (f * x + a6) % p
    lin = (a1 * x + a3) % p
    d = (lin * lin + 4 * f) % p
    squares = squares_table(p)
    chi = np.where(d == 0, 0, np.where(squares[d], 1, -1))
    return int(chi.sum())


def _counting_model(curve: CurveQ, p: int) -> CurveQ:
    if curve.disc % p != 0:
        return curve
    if p < 5:
        raise BadReduction(
            f"p={p} divides the model discriminant",
            detail="point counting at 2 and 3 needs a model with good reduction",
            prime=p,
        )
    model = minimal_model_at(curve, p)
    if model.disc % p == 0:
        raise BadReduction(f"curve {curve} has bad reduction at p={p}", prime=p)
    return model


def count_points(
    curve: CurveQ, p: int, limit: Optional[int] = None
) -> FrobeniusRecord:
    """a_p = p + 1 - #E(F_p) at a good prime by exhaustive counting."""
    limit = settings.point_count_limit if limit is None else limit
    if p > limit:
        raise PrimeTooLarge(
            f"p={p} exceeds the point-counting limit {limit}", prime=p
        )
    model = _counting_model(curve, p)
    if p == 2:
        a_p = p + 1 - naive_point_count(model, p)
    else:
        a_p = -_character_sum(model, p)
    return FrobeniusRecord(p, a_p)


def power_sum(poly: FrobPoly, k: int) -> int:
    """alpha^k + beta^k for the roots of x^2 - a x + q."""
    a, q = poly.trace, poly.norm
    s_prev, s_cur = 2, a
    if k == 0:
        return s_prev
    for _ in range(k - 1):
        s_prev, s_cur = s_cur, a * s_cur - q * s_prev
    return s_cur


def adams12(poly: FrobPoly) -> FrobPoly:
    """Twelfth Adams operation: the polynomial whose roots are the 12th powers."""
    s12 = power_sum(poly, 12)
    q12 = poly.norm**12
    if abs(s12) > 2 * poly.norm**6:
        raise InvariantViolation(
            f"|s12| exceeds 2q^6 for {poly}", module="frobenius-engine"
        )
    return FrobPoly(s12, q12)


@dataclass(frozen=True)
class DistinguishingResult:
    mode: CompareMode
    bound: int
    compared: int
    prime: Optional[int] = None
    difference: Optional[int] = None

    @property
    def found(self) -> bool:
        return self.prime is not None


def _comparable_value(a_p: int, p: int, mode: CompareMode) -> int:
    if mode is CompareMode.PLAIN:
        return a_p
    return adams12(FrobPoly(a_p, p)).trace


def compare_traces(
    table: TraceTable, other: TraceTable, mode: CompareMode, bound: int
) -> DistinguishingResult:
    """Smallest common good prime v <= bound where the Frobenius data differ."""
    for t in (table, other):
        if t.bound < bound:
            raise InsufficientTable(
                f"table for [{t.curve_id}] covers p <= {t.bound}, need {bound}"
            )

    compared = 0
    for rec in table.records:
        if rec.p > bound:
            break
        a_other = other.trace(rec.p)
        if a_other is None:
            continue
        compared += 1
        left = _comparable_value(rec.a_p, rec.p, mode)
        right = _comparable_value(a_other, rec.p, mode)
        if left != right:
            return DistinguishingResult(mode, bound, compared, rec.p, abs(left - right))
    return DistinguishingResult(mode, bound, compared)


@dataclass(frozen=True)
class CongruenceCertificate:
    """Trace difference at one prime and the size it cannot be divided by.

    Plain mode: A = a_p - a_p', |A| <= 4 sqrt(p). Adams12 mode:
    B = s12 - s12', |B| <= 4 p^6. Any modulus above the bound that divides
    the difference forces it to vanish.
    """

    p: int
    mode: CompareMode
    difference: int

    def forces_equality(self, modulus: int) -> bool:
        if modulus <= 0:
            return False
        if self.mode is CompareMode.PLAIN:
            return modulus * modulus > 16 * self.p
        return modulus > 4 * self.p**6

    def admits_modulus(self, modulus: int) -> bool:
        return modulus != 0 and self.difference % modulus == 0

    @property
    def bound_text(self) -> str:
        if self.mode is CompareMode.PLAIN:
            return f"4*sqrt({self.p}) = {4 * math.sqrt(self.p):.6f}"
        return str(4 * self.p**6)

    @property
    def clause(self) -> str:
        if self.difference == 0:
            return "difference is zero; the certificate is vacuous"
        if self.mode is CompareMode.PLAIN:
            return (
                f"any ell dividing A with ell > 4*sqrt({self.p}) forces A = 0, "
                f"so ell <= |A| = {abs(self.difference)}"
            )
        return (
            f"any R dividing B with R > 4*{self.p}^6 forces B = 0, "
            f"so R <= |B| = {abs(self.difference)}"
        )


def congruence_certificate(
    record: FrobeniusRecord, other: FrobeniusRecord, mode: CompareMode
) -> CongruenceCertificate:
    if record.p != other.p:
        raise PrimeMismatch(
            "congruence certificate needs records at the same prime",
            detail=f"got p={record.p} and p={other.p}",
        )
    p = record.p
    mine = _comparable_value(record.a_p, p, mode)
    diff = mine - _comparable_value(other.a_p, p, mode)
    cert = CongruenceCertificate(p, mode, diff)
    if mode is CompareMode.PLAIN:
        bound_ok = diff * diff <= 16 * p
    else:
        bound_ok = abs(diff) <= 4 * p**6
    if not bound_ok:
        raise InvariantViolation(
            f"difference {diff} at p={p} exceeds its bound", module="frobenius-engine"
        )
    return cert


class FrobeniusEngine:
    """Builds trace tables, reading and extending the on-disk cache."""

    def __init__(
        self,
        cache: Optional[TraceCache] = None,
        point_count_limit: Optional[int] = None,
    ):
        self.cache = cache
        self.point_count_limit = point_count_limit or settings.point_count_limit

    def _count_many(
        self, curve: CurveQ, primes: Sequence[int]
    ) -> list[FrobeniusRecord]:
        return [count_points(curve, p, self.point_count_limit) for p in primes]

    def build_table(
        self,
        curve: CurveQ,
        bound: int,
        profile: ReductionProfile,
        jobs: int = 1,
    ) -> TraceTable:
        """Traces at every good prime p <= bound; identical for any ``jobs``."""
        bad = profile.bad_primes
        wanted: list[int] = []
        skipped: set[int] = set()
        for p in (int(p) for p in primes_up_to(bound)):
            if p in bad:
                continue
            if p < 5 and curve.disc % p == 0:
                skipped.add(p)
                continue
            wanted.append(p)

        cached = self.cache.load(curve.curve_id) if self.cache else {}
        known = {p: cached[p] for p in wanted if p in cached}
        missing = [p for p in wanted if p not in known]

        computed: list[FrobeniusRecord] = []
        if missing:
            jobs = max(1, jobs)
            if jobs == 1:
                computed = self._count_many(curve, missing)
            else:
                chunks = [missing[i::jobs] for i in range(jobs)]
                with ThreadPoolExecutor(max_workers=jobs) as pool:
                    for part in pool.map(lambda c: self._count_many(curve, c), chunks):
                        computed.extend(part)
            if self.cache:
                self.cache.append(curve.curve_id, [(r.p, r.a_p) for r in computed])

        records = [FrobeniusRecord(p, a) for p, a in known.items()] + computed
        records.sort(key=lambda r: r.p)
        logger.info(
            "Trace table for %s: %d good primes up to %d (%d cached, %d computed)",
            curve,
            len(records),
            bound,
            len(known),
            len(computed),
        )
        if skipped:
            logger.warning(
                "Skipped p in %s: good reduction but singular stored model",
                sorted(skipped),
            )
        return TraceTable(
            curve.curve_id, tuple(records), bad, bound, frozenset(skipped)
        )
