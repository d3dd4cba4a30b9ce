"""Integral Weierstrass curves over Q and their reduction data."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

from exceptional_primes.core.exceptions import InvariantViolation
from exceptional_primes.core.logging import get_logger
from exceptional_primes.models.enums import ReductionKind, ReductionSource
from exceptional_primes.services.arithmetic import (
    legendre,
    prime_divisors,
    valuation,
)
from exceptional_primes.services.exceptions import (
    CurveInputError,
    InvalidOverride,
    MissingOverride,
    SingularCurve,
)

logger = get_logger(__name__)

# Admissible conductor exponents at the primes Tate's algorithm is not run at.
_ADDITIVE_EXPONENT_RANGE = {2: range(2, 9), 3: range(2, 6)}


@dataclass(frozen=True)
class CurveQ:
    """Integral Weierstrass model y^2 + a1xy + a3y = x^3 + a2x^2 + a4x + a6."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    b2: int
    b4: int
    b6: int
    b8: int
    c4: int
    c6: int
    disc: int
    j_num: int
    j_den: int

    @property
    def ainvs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def curve_id(self) -> str:
        """Canonical identifier: the five a-invariants, comma separated."""
        return ",".join(str(a) for a in self.ainvs)

    def __str__(self) -> str:
        return f"[{self.curve_id}]"


def build_curve(a1: int, a2: int, a3: int, a4: int, a6: int) -> CurveQ:
    """Construct a curve and all derived invariants; reject singular models."""
    a1, a2, a3, a4, a6 = (int(a) for a in (a1, a2, a3, a4, a6))

    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    if disc == 0:
        raise SingularCurve(
            f"Weierstrass model [{a1},{a2},{a3},{a4},{a6}] is singular",
            detail="discriminant is zero",
        )
    if 1728 * disc != c4**3 - c6**2:
        raise InvariantViolation(
            "1728*disc != c4^3 - c6^2", module="curve-model"
        )

    num, den = c4**3, disc
    g = math.gcd(num, den)
    num, den = num // g, den // g
    if den < 0:
        num, den = -num, -den
    if disc % den != 0:
        raise InvariantViolation(
            "j denominator does not divide disc", module="curve-model"
        )

    return CurveQ(a1, a2, a3, a4, a6, b2, b4, b6, b8, c4, c6, disc, num, den)


def _exact_div(numerator: int, denominator: int) -> int:
    q, rem = divmod(numerator, denominator)
    if rem:
        raise CurveInputError(
            "change of variables leaves the integral model",
            detail=f"{numerator} is not divisible by {denominator}",
        )
    return q


def change_coordinates(curve: CurveQ, u: int, r: int, s: int, t: int) -> CurveQ:
    """Apply x = u^2 x' + r, y = u^3 y' + s u^2 x' + t; result must be integral."""
    if u == 0:
        raise CurveInputError("change of variables needs u != 0")
    a1, a2, a3, a4, a6 = curve.ainvs
    return build_curve(
        _exact_div(a1 + 2 * s, u),
        _exact_div(a2 - s * a1 + 3 * r - s * s, u**2),
        _exact_div(a3 + r * a1 + 2 * t, u**3),
        _exact_div(
            a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t, u**4
        ),
        _exact_div(a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1, u**6),
    )


def scale_model(curve: CurveQ, u: int) -> CurveQ:
    """The model with a_i replaced by u^i a_i (discriminant times u^12)."""
    a1, a2, a3, a4, a6 = curve.ainvs
    return build_curve(u * a1, u**2 * a2, u**3 * a3, u**4 * a4, u**6 * a6)


def _is_p_minimal(curve: CurveQ, p: int) -> bool:
    return valuation(curve.disc, p) < 12 or valuation(curve.c4, p) < 4


def minimal_model_at(curve: CurveQ, p: int) -> CurveQ:
    """Return a p-minimal model for p >= 5 (unchanged if already minimal)."""
    if p < 5:
        raise CurveInputError(f"minimal_model_at needs p >= 5, got {p}")

    model = curve
    inv2 = pow(2, -1, p**3)
    inv3 = pow(3, -1, p**2)
    while not _is_p_minimal(model, p):
        a1, a2, a3, _, _ = model.ainvs
        s = (-a1 * inv2) % p
        r = ((s * s + s * a1 - a2) * inv3) % p**2
        t = (-(a3 + r * a1) * inv2) % p**3
        try:
            model = change_coordinates(model, p, r, s, t)
        except CurveInputError as exc:
            raise InvariantViolation(
                f"reduction step at p={p} was not integral",
                detail=exc.detail,
                module="curve-model",
            ) from exc
    return model


@dataclass(frozen=True)
class ReductionOverride:
    """User-supplied reduction data for one prime."""

    kind: ReductionKind
    exponent: int


@dataclass(frozen=True)
class ReductionEntry:
    p: int
    kind: ReductionKind
    conductor_exponent: int
    source: ReductionSource


@dataclass(frozen=True)
class ReductionProfile:
    entries: tuple[ReductionEntry, ...]
    conductor: int
    additive_count: int
    _by_prime: dict[int, ReductionEntry] = field(
        default_factory=dict, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        self._by_prime.update({e.p: e for e in self.entries})

    @property
    def N_E(self) -> int:
        return self.conductor

    @property
    def a_E(self) -> int:
        return self.additive_count

    @property
    def bad_primes(self) -> frozenset[int]:
        return frozenset(e.p for e in self.entries if e.kind is not ReductionKind.GOOD)

    @property
    def additive_primes(self) -> frozenset[int]:
        return frozenset(e.p for e in self.entries if e.kind is ReductionKind.ADDITIVE)

    def entry(self, p: int) -> Optional[ReductionEntry]:
        return self._by_prime.get(p)

    def is_good(self, p: int) -> bool:
        found = self._by_prime.get(p)
        return found is None or found.kind is ReductionKind.GOOD


def validate_override(p: int, override: ReductionOverride) -> None:
    """Reject overrides that break the conductor-exponent rules."""
    kind, exp = override.kind, override.exponent
    if kind is ReductionKind.GOOD:
        ok = exp == 0
    elif kind.is_multiplicative:
        ok = exp == 1
    elif p in _ADDITIVE_EXPONENT_RANGE:
        ok = exp in _ADDITIVE_EXPONENT_RANGE[p]
    else:
        ok = exp == 2
    if not ok:
        raise InvalidOverride(
            f"override at p={p} is inconsistent",
            detail=f"kind {kind.value} cannot have conductor exponent {exp}",
        )


def _computed_entry(curve: CurveQ, p: int) -> ReductionEntry:
    model = minimal_model_at(curve, p)
    if model.disc % p != 0:
        kind, exp = ReductionKind.GOOD, 0
    elif model.c4 % p != 0:
        split = legendre(-model.c6, p) == 1
        kind = (
            ReductionKind.MULTIPLICATIVE_SPLIT
            if split
            else ReductionKind.MULTIPLICATIVE_NONSPLIT
        )
        exp = 1
    else:
        kind, exp = ReductionKind.ADDITIVE, 2
    return ReductionEntry(p, kind, exp, ReductionSource.COMPUTED)


def reduction_profile(
    curve: CurveQ, overrides: Optional[Mapping[int, ReductionOverride]] = None
) -> ReductionProfile:
    """Per-prime reduction types, conductor norm N_E and additive count a_E.

    Primes p >= 5 are classified on the p-minimal model. Primes 2 and 3
    dividing the model discriminant must come with an override.
    """
    overrides = dict(overrides or {})
    for p, override in overrides.items():
        validate_override(p, override)

    primes = set(prime_divisors(curve.disc)) | set(overrides)
    entries: list[ReductionEntry] = []
    for p in sorted(primes):
        if p in overrides:
            o = overrides[p]
            entries.append(
                ReductionEntry(p, o.kind, o.exponent, ReductionSource.USER_OVERRIDE)
            )
        elif p in (2, 3):
            raise MissingOverride(
                f"p={p} divides the discriminant; supply its reduction type",
                detail="reduction at 2 and 3 is not computed",
                prime=p,
            )
        else:
            entries.append(_computed_entry(curve, p))

    conductor = math.prod(e.p**e.conductor_exponent for e in entries)
    additive = sum(1 for e in entries if e.kind is ReductionKind.ADDITIVE)
    logger.debug("Reduction profile of %s: N_E=%d a_E=%d", curve, conductor, additive)
    return ReductionProfile(tuple(entries), conductor, additive)
