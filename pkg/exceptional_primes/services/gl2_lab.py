"""Exact subgroup machinery in GL2(F_ell).

Elements are :class:`Mat2` values. Subgroups are either explicit frozensets
built by closure (small ell only) or :class:`SubgroupFamily` objects that
answer membership and sampling parametrically.

Lines over F_{ell^2} are indexed by integers: t = x + y*sqrt(eps) is the
line through (1, t) and gets index x + y*ell; index ell^2 is the line
through (0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from sympy import factorint

from exceptional_primes.core.config import settings
from exceptional_primes.core.exceptions import InvariantViolation
from exceptional_primes.core.logging import get_logger
from exceptional_primes.models.enums import (
    CartanKind,
    IrregularPattern,
    ProjectiveOrderClass,
    SubgroupFamilyKind,
    SubgroupTag,
)
from exceptional_primes.services.arithmetic import (
    generator_mod,
    is_prime,
    legendre,
    quadratic_nonresidue,
)
from exceptional_primes.services.exceptions import (
    InvalidEps,
    InvalidModulus,
    NotClosed,
    SizeCapExceeded,
    ZeroDet,
)

logger = get_logger(__name__)

ACCEPTABLE_PRIME_FLOOR = 53

_IRREGULAR_ORDER_STATS = {
    IrregularPattern.A4: (12, frozenset({1, 2, 3})),
    IrregularPattern.S4: (24, frozenset({1, 2, 3, 4})),
    IrregularPattern.A5: (60, frozenset({1, 2, 3, 5})),
}


def is_acceptable(p: int, ramified_primes: Iterable[int] = ()) -> bool:
    """Primes p >= 53 unramified in K."""
    return p >= ACCEPTABLE_PRIME_FLOOR and p not in set(ramified_primes)


def _check_modulus(ell: int) -> None:
    if ell < 3 or not is_prime(ell):
        raise InvalidModulus(f"GL2 lab needs an odd prime modulus, got {ell}")


@dataclass(frozen=True, slots=True)
class Mat2:
    """[[a, b], [c, d]] over F_ell with nonzero determinant."""

    a: int
    b: int
    c: int
    d: int
    ell: int

    def __post_init__(self) -> None:
        if (self.a * self.d - self.b * self.c) % self.ell == 0:
            raise ZeroDet(f"matrix {self.entries} is singular mod {self.ell}")

    @classmethod
    def of(cls, a: int, b: int, c: int, d: int, ell: int) -> "Mat2":
        return cls(a % ell, b % ell, c % ell, d % ell, ell)

    @classmethod
    def identity(cls, ell: int) -> "Mat2":
        return cls(1, 0, 0, 1, ell)

    @classmethod
    def diag(cls, x: int, y: int, ell: int) -> "Mat2":
        return cls.of(x, 0, 0, y, ell)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.ell

    @property
    def trace(self) -> int:
        return (self.a + self.d) % self.ell

    @property
    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def __mul__(self, other: "Mat2") -> "Mat2":
        n = self.ell
        return Mat2(
            (self.a * other.a + self.b * other.c) % n,
            (self.a * other.b + self.b * other.d) % n,
            (self.c * other.a + self.d * other.c) % n,
            (self.c * other.b + self.d * other.d) % n,
            n,
        )

    def inverse(self) -> "Mat2":
        inv = pow(self.det, -1, self.ell)
        return Mat2.of(
            self.d * inv, -self.b * inv, -self.c * inv, self.a * inv, self.ell
        )

    def __pow__(self, k: int) -> "Mat2":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = Mat2.identity(self.ell)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def projective_order(self) -> int:
        """Order of the image in PGL2(F_ell)."""
        power = self
        for k in range(1, self.ell * self.ell + 2):
            if power.is_scalar:
                return k
            power = power * self
        raise InvariantViolation(
            f"no projective order found for {self.entries}", module="gl2-lab"
        )

    def sort_key(self) -> tuple[int, int, int, int]:
        return self.entries


def commutator(x: Mat2, y: Mat2) -> Mat2:
    """x y x^-1 y^-1."""
    return x * y * x.inverse() * y.inverse()


def standard_sl2_generators(ell: int) -> tuple[Mat2, Mat2]:
    return Mat2(1, 1, 0, 1, ell), Mat2(1, 0, 1, 1, ell)


# Projective order fingerprint


def projective_order_of_trace(t: int, q: int, ell: int) -> ProjectiveOrderClass:
    """Projective order class of any element with trace t and determinant q."""
    t %= ell
    q %= ell
    if q == 0:
        raise ZeroDet(f"determinant is zero mod {ell}")
    u = t * t * pow(q, -1, ell) % ell
    if u == 4 % ell:
        return ProjectiveOrderClass.ONE_OR_ELL
    if u == 0:
        return ProjectiveOrderClass.TWO
    if u == 1:
        return ProjectiveOrderClass.THREE
    if u == 2:
        return ProjectiveOrderClass.FOUR
    if (u * u - 3 * u + 1) % ell == 0:
        return ProjectiveOrderClass.FIVE
    return ProjectiveOrderClass.LARGE


def order_class(order: int, ell: int) -> ProjectiveOrderClass:
    """The fingerprint class a true projective order belongs to."""
    if order in (1, ell):
        return ProjectiveOrderClass.ONE_OR_ELL
    return {
        2: ProjectiveOrderClass.TWO,
        3: ProjectiveOrderClass.THREE,
        4: ProjectiveOrderClass.FOUR,
        5: ProjectiveOrderClass.FIVE,
    }.get(order, ProjectiveOrderClass.LARGE)


# F_{ell^2} = F_ell[r]/(r^2 - eps) and its projective line


@dataclass(frozen=True)
class ProjectiveLine:
    """P^1(F_{ell^2}) with the Moebius action of GL2(F_ell)."""

    ell: int
    eps: int

    @property
    def infinity(self) -> int:
        return self.ell * self.ell

    @property
    def size(self) -> int:
        return self.ell * self.ell + 1

    def _split(self, t: int) -> tuple[int, int]:
        return t % self.ell, t // self.ell

    def _join(self, x: int, y: int) -> int:
        return x % self.ell + (y % self.ell) * self.ell

    def _mul(self, s: tuple[int, int], t: tuple[int, int]) -> tuple[int, int]:
        n = self.ell
        return (
            (s[0] * t[0] + self.eps * s[1] * t[1]) % n,
            (s[0] * t[1] + s[1] * t[0]) % n,
        )

    def _inv(self, s: tuple[int, int]) -> tuple[int, int]:
        n = self.ell
        norm = (s[0] * s[0] - self.eps * s[1] * s[1]) % n
        inv = pow(norm, -1, n)
        return (s[0] * inv % n, -s[1] * inv % n)

    def image(self, m: Mat2, t: int) -> int:
        """The line M.(1, t) as an index; t -> (c + d t) / (a + b t)."""
        n = self.ell
        if t == self.infinity:
            if m.b == 0:
                return self.infinity
            return self._join(m.d * pow(m.b, -1, n), 0)
        x, y = self._split(t)
        den = ((m.a + m.b * x) % n, m.b * y % n)
        num = ((m.c + m.d * x) % n, m.d * y % n)
        if den == (0, 0):
            return self.infinity
        return self._join(*self._mul(num, self._inv(den)))

    def permutation(self, m: Mat2) -> list[int]:
        return [self.image(m, t) for t in range(self.size)]

    def describe(self, t: int) -> str:
        if t == self.infinity:
            return "inf"
        x, y = self._split(t)
        return str(x) if y == 0 else f"{x}+{y}r"

    def orbits(self, generators: Sequence[Mat2]) -> list[list[int]]:
        """Orbits of the group generated by ``generators`` on the line."""
        perms = [self.permutation(g) for g in generators]
        seen = [False] * self.size
        orbits: list[list[int]] = []
        for start in range(self.size):
            if seen[start]:
                continue
            seen[start] = True
            orbit = [start]
            stack = [start]
            while stack:
                t = stack.pop()
                for perm in perms:
                    nxt = perm[t]
                    if not seen[nxt]:
                        seen[nxt] = True
                        orbit.append(nxt)
                        stack.append(nxt)
            orbits.append(sorted(orbit))
        return orbits


def fixed_lines(m: Mat2, eps: Optional[int] = None) -> list[int]:
    """Eigenlines of a single element over F_{ell^2}."""
    line = ProjectiveLine(m.ell, eps or quadratic_nonresidue(m.ell))
    return [t for t in range(line.size) if line.image(m, t) == t]


# Closure


def closure(
    generators: Sequence[Mat2],
    ell: Optional[int] = None,
    cap: Optional[int] = None,
    within: Optional[frozenset[Mat2]] = None,
) -> frozenset[Mat2]:
    """The subgroup generated by ``generators`` as an explicit set.

    Raises :class:`SizeCapExceeded` past ``cap`` elements and
    :class:`NotClosed` as soon as an element leaves ``within``.
    """
    if ell is None:
        if not generators:
            raise InvalidModulus("closure of an empty generator list needs ell")
        ell = generators[0].ell
    cap = settings.closure_size_cap if cap is None else cap

    identity = Mat2.identity(ell)
    found = {identity}
    queue = [identity]
    while queue:
        h = queue.pop()
        for g in generators:
            hg = h * g
            if hg in found:
                continue
            if within is not None and hg not in within:
                raise NotClosed(
                    "element set is not closed under multiplication",
                    detail=f"product {hg.entries} is missing",
                )
            found.add(hg)
            if len(found) > cap:
                raise SizeCapExceeded(
                    f"closure exceeds the size cap {cap}",
                    detail="use a parametric subgroup family for this modulus",
                )
            queue.append(hg)
    return frozenset(found)


def generating_subset(elements: Iterable[Mat2]) -> list[Mat2]:
    """Greedy generators for a closed set; each pick at least doubles the span."""
    pool = frozenset(elements)
    if not pool:
        raise NotClosed("empty element set is not a group")
    ordered = sorted(pool, key=Mat2.sort_key)
    ell = ordered[0].ell
    gens: list[Mat2] = []
    span = frozenset({Mat2.identity(ell)})
    if not span <= pool:
        raise NotClosed("element set does not contain the identity")
    for x in ordered:
        if x in span:
            continue
        gens.append(x)
        span = closure(gens, ell, cap=len(pool), within=pool)
        if len(span) == len(pool):
            break
    return gens


# Classification


@dataclass(frozen=True)
class SubgroupClass:
    tag: SubgroupTag
    evidence: str
    pattern: Optional[IrregularPattern] = None
    projective_size: Optional[int] = None


def _projective_size(elements: frozenset[Mat2]) -> int:
    scalars = sum(1 for m in elements if m.is_scalar)
    return len(elements) // scalars


def classify_subgroup(
    elements: Iterable[Mat2], ell: int, eps: Optional[int] = None
) -> SubgroupClass:
    """Place a closed subgroup in the subgroup dichotomy.

    Two or more common eigenlines give the Cartan refinement of the
    reducible case.
    """
    _check_modulus(ell)
    group = frozenset(elements)
    gens = generating_subset(group)
    line = ProjectiveLine(ell, eps or quadratic_nonresidue(ell))
    orbits = line.orbits(gens)

    fixed = [o[0] for o in orbits if len(o) == 1]
    if len(fixed) >= 2:
        shown = ", ".join(line.describe(t) for t in fixed[:4])
        return SubgroupClass(
            SubgroupTag.CARTAN_ONLY, f"{len(fixed)} common eigenlines: {shown}"
        )
    if len(fixed) == 1:
        return SubgroupClass(
            SubgroupTag.REDUCIBLE, f"common eigenline {line.describe(fixed[0])}"
        )

    pairs = [o for o in orbits if len(o) == 2]
    if pairs:
        t1, t2 = pairs[0]
        return SubgroupClass(
            SubgroupTag.NORMALIZER_NOT_CARTAN,
            f"line pair {{{line.describe(t1)}, {line.describe(t2)}}} "
            "preserved and swapped",
        )

    if all(g in group for g in standard_sl2_generators(ell)):
        return SubgroupClass(
            SubgroupTag.CONTAINS_SL2, "contains [[1,1],[0,1]] and [[1,0],[1,1]]"
        )

    size = _projective_size(group)
    stats: frozenset[int] = frozenset()
    # an element of projective order above 5 rules out A4, S4 and A5
    if size <= 60 and max_projective_order(group, ell) <= 5:
        stats = frozenset(m.projective_order() for m in group)
    for pattern, (expected_size, expected_stats) in _IRREGULAR_ORDER_STATS.items():
        if size == expected_size and stats == expected_stats:
            return SubgroupClass(
                SubgroupTag.IRREGULAR,
                f"projective image of order {size} with element orders {sorted(stats)}",
                pattern=pattern,
                projective_size=size,
            )

    if ell >= 5:
        raise InvariantViolation(
            f"closed subgroup of order {len(group)} mod {ell} fits no case",
            module="gl2-lab",
        )
    return SubgroupClass(SubgroupTag.OTHER, f"projective image of order {size}")


def max_projective_order(elements: Iterable[Mat2], ell: int) -> int:
    """Largest order of an element of the closed set in PGL2(F_ell)."""
    _check_modulus(ell)
    group = frozenset(elements)
    if any(m.ell != ell for m in group):
        raise InvalidModulus(f"elements are not all defined mod {ell}")
    generating_subset(group)
    return max(m.projective_order() for m in group)


# Cartan subgroups, normalizers and the parametric families


def _nonsplit_generator(ell: int, eps: int) -> tuple[int, int]:
    """(x, y) with x + y sqrt(eps) generating F_{ell^2}^*."""
    order = ell * ell - 1
    line = ProjectiveLine(ell, eps)
    cofactors = [order // r for r in factorint(order)]

    def power(z: tuple[int, int], k: int) -> tuple[int, int]:
        result = (1, 0)
        while k:
            if k & 1:
                result = line._mul(result, z)
            z = line._mul(z, z)
            k >>= 1
        return result

    for y in range(1, ell):
        for x in range(ell):
            z = (x, y)
            if all(power(z, k) != (1, 0) for k in cofactors):
                return z
    raise InvariantViolation(f"no generator of F_{ell}^2 found", module="gl2-lab")


def _validated_eps(ell: int, eps: Optional[int]) -> int:
    if eps is None:
        return quadratic_nonresidue(ell)
    if legendre(eps, ell) != -1:
        raise InvalidEps(f"eps={eps} is not a quadratic nonresidue mod {ell}")
    return eps % ell


@dataclass(frozen=True)
class SubgroupFamily:
    """A subgroup of GL2(F_ell) given by generators and a membership rule."""

    kind: SubgroupFamilyKind
    ell: int
    generators: tuple[Mat2, ...]
    order: int
    expected_tag: SubgroupTag
    eps: int
    pattern: Optional[IrregularPattern] = None
    _contains: Callable[[Mat2], bool] = field(
        repr=False, compare=False, default=lambda m: True
    )
    _sampler: Optional[Callable[[np.random.Generator], Mat2]] = field(
        repr=False, compare=False, default=None
    )
    _cartan: Optional[Callable[[Mat2], bool]] = field(
        repr=False, compare=False, default=None
    )

    def contains(self, m: Mat2) -> bool:
        return m.ell == self.ell and self._contains(m)

    def in_cartan(self, m: Mat2) -> bool:
        """For normalizer families: whether m lies in the Cartan subgroup."""
        if self._cartan is None:
            raise InvariantViolation(
                f"{self.kind.value} has no Cartan subgroup", module="gl2-lab"
            )
        return self._cartan(m)

    def sample(self, rng: np.random.Generator) -> Mat2:
        """A uniformly random element."""
        if self._sampler is not None:
            return self._sampler(rng)
        return self.elements_sorted[int(rng.integers(len(self.elements_sorted)))]

    @cached_property
    def elements(self) -> frozenset[Mat2]:
        return closure(self.generators, self.ell)

    @cached_property
    def elements_sorted(self) -> tuple[Mat2, ...]:
        return tuple(sorted(self.elements, key=Mat2.sort_key))


def _rand_unit(rng: np.random.Generator, ell: int) -> int:
    return int(rng.integers(1, ell))


def _rand_residue(rng: np.random.Generator, ell: int) -> int:
    return int(rng.integers(0, ell))


def _split_cartan_member(m: Mat2) -> bool:
    return m.b == 0 and m.c == 0


def _nonsplit_cartan_member(eps: int) -> Callable[[Mat2], bool]:
    return lambda m: m.a == m.d and m.b == eps * m.c % m.ell


def cartan(ell: int, kind: CartanKind, eps: Optional[int] = None) -> SubgroupFamily:
    """Split (diagonal) or nonsplit ([[x, eps y], [y, x]]) Cartan subgroup."""
    _check_modulus(ell)
    eps = _validated_eps(ell, eps)
    if kind is CartanKind.SPLIT:
        g = generator_mod(ell)

        def sample_split(rng: np.random.Generator) -> Mat2:
            return Mat2.diag(_rand_unit(rng, ell), _rand_unit(rng, ell), ell)

        return SubgroupFamily(
            SubgroupFamilyKind.SPLIT_CARTAN,
            ell,
            (Mat2.diag(g, 1, ell), Mat2.diag(1, g, ell)),
            (ell - 1) ** 2,
            SubgroupTag.CARTAN_ONLY,
            eps,
            _contains=_split_cartan_member,
            _sampler=sample_split,
            _cartan=_split_cartan_member,
        )

    x, y = _nonsplit_generator(ell, eps)
    member = _nonsplit_cartan_member(eps)

    def sample_nonsplit(rng: np.random.Generator) -> Mat2:
        while True:
            u, v = _rand_residue(rng, ell), _rand_residue(rng, ell)
            if u or v:
                return Mat2.of(u, eps * v, v, u, ell)

    return SubgroupFamily(
        SubgroupFamilyKind.NONSPLIT_CARTAN,
        ell,
        (Mat2.of(x, eps * y, y, x, ell),),
        ell * ell - 1,
        SubgroupTag.CARTAN_ONLY,
        eps,
        _contains=member,
        _sampler=sample_nonsplit,
        _cartan=member,
    )


def normalizer(ell: int, kind: CartanKind, eps: Optional[int] = None) -> SubgroupFamily:
    """Normalizer of a Cartan subgroup: the Cartan plus its line-swapping coset."""
    base = cartan(ell, kind, eps)
    eps = base.eps
    if kind is CartanKind.SPLIT:
        swap = Mat2(0, 1, 1, 0, ell)
        family_kind = SubgroupFamilyKind.SPLIT_NORMALIZER

        def member(m: Mat2) -> bool:
            return _split_cartan_member(m) or (m.a == 0 and m.d == 0)

    else:
        swap = Mat2.of(1, 0, 0, -1, ell)
        family_kind = SubgroupFamilyKind.NONSPLIT_NORMALIZER
        in_c = _nonsplit_cartan_member(eps)

        def member(m: Mat2) -> bool:
            return in_c(m) or ((m.a + m.d) % ell == 0 and (m.b + eps * m.c) % ell == 0)

    def sample(rng: np.random.Generator) -> Mat2:
        h = base.sample(rng)
        return h * swap if rng.integers(2) else h

    return SubgroupFamily(
        family_kind,
        ell,
        base.generators + (swap,),
        2 * base.order,
        SubgroupTag.NORMALIZER_NOT_CARTAN,
        eps,
        _contains=member,
        _sampler=sample,
        _cartan=base._cartan,
    )


def _random_matrix(rng: np.random.Generator, ell: int, det_one: bool) -> Mat2:
    while True:
        a, b, c, d = (int(v) for v in rng.integers(0, ell, size=4))
        det = (a * d - b * c) % ell
        if det and (not det_one or det == 1):
            return Mat2(a, b, c, d, ell)


def borel(ell: int) -> SubgroupFamily:
    _check_modulus(ell)
    g = generator_mod(ell)

    def sample(rng: np.random.Generator) -> Mat2:
        return Mat2.of(
            _rand_unit(rng, ell), _rand_residue(rng, ell), 0, _rand_unit(rng, ell), ell
        )

    return SubgroupFamily(
        SubgroupFamilyKind.BOREL,
        ell,
        (Mat2.diag(g, 1, ell), Mat2.diag(1, g, ell), Mat2(1, 1, 0, 1, ell)),
        (ell - 1) ** 2 * ell,
        SubgroupTag.REDUCIBLE,
        quadratic_nonresidue(ell),
        _contains=lambda m: m.c == 0,
        _sampler=sample,
    )


def special_linear(ell: int) -> SubgroupFamily:
    _check_modulus(ell)
    return SubgroupFamily(
        SubgroupFamilyKind.SPECIAL_LINEAR,
        ell,
        standard_sl2_generators(ell),
        ell * (ell * ell - 1),
        SubgroupTag.CONTAINS_SL2,
        quadratic_nonresidue(ell),
        _contains=lambda m: m.det == 1,
        _sampler=lambda rng: _random_matrix(rng, ell, det_one=True),
    )


def general_linear(ell: int) -> SubgroupFamily:
    _check_modulus(ell)
    g = generator_mod(ell)
    return SubgroupFamily(
        SubgroupFamilyKind.GENERAL_LINEAR,
        ell,
        standard_sl2_generators(ell) + (Mat2.diag(g, 1, ell),),
        (ell * ell - 1) * (ell * ell - ell),
        SubgroupTag.CONTAINS_SL2,
        quadratic_nonresidue(ell),
        _sampler=lambda rng: _random_matrix(rng, ell, det_one=False),
    )


_IRREGULAR_KINDS = {
    IrregularPattern.A4: (SubgroupFamilyKind.IRREGULAR_A4, ProjectiveOrderClass.THREE),
    IrregularPattern.S4: (SubgroupFamilyKind.IRREGULAR_S4, ProjectiveOrderClass.FOUR),
    IrregularPattern.A5: (SubgroupFamilyKind.IRREGULAR_A5, ProjectiveOrderClass.FIVE),
}


def irregular(ell: int, pattern: IrregularPattern) -> Optional[SubgroupFamily]:
    """A lift of A4, S4 or A5 into GL2(F_ell), or None if none embeds.

    Deterministic search: b = [[0,-1],[1,-1]] has projective order 3 and
    a runs over trace-zero matrices, with ab of projective order 3, 4 or 5.
    """
    _check_modulus(ell)
    if pattern is IrregularPattern.A5 and (ell == 5 or (ell * ell) % 5 != 1):
        return None

    family_kind, product_class = _IRREGULAR_KINDS[pattern]
    expected_size = _IRREGULAR_ORDER_STATS[pattern][0]
    b = Mat2.of(0, -1, 1, -1, ell)
    sl2_gens = standard_sl2_generators(ell)
    for x in range(ell):
        for y in range(ell):
            for z in range(ell):
                det = (-x * x - y * z) % ell
                if det == 0 or (pattern is not IrregularPattern.S4 and det != 1):
                    continue
                a = Mat2.of(x, y, z, -x, ell)
                ab = a * b
                ab_class = projective_order_of_trace(ab.trace, ab.det, ell)
                if ab_class is not product_class:
                    continue
                try:
                    group = closure((a, b), ell, cap=expected_size * (ell - 1))
                except SizeCapExceeded:
                    continue
                if _projective_size(group) != expected_size:
                    continue
                if all(g in group for g in sl2_gens):
                    continue
                logger.debug(
                    "Irregular %s lift mod %d: a=%s", pattern.value, ell, a.entries
                )
                return SubgroupFamily(
                    family_kind,
                    ell,
                    (a, b),
                    len(group),
                    SubgroupTag.IRREGULAR,
                    quadratic_nonresidue(ell),
                    pattern=pattern,
                    _contains=group.__contains__,
                )
    return None


def subgroup_families(ell: int, include_irregular: bool = True) -> list[SubgroupFamily]:
    """Every parametric family at ell, irregular lifts only where they embed."""
    families = [
        borel(ell),
        cartan(ell, CartanKind.SPLIT),
        cartan(ell, CartanKind.NONSPLIT),
        normalizer(ell, CartanKind.SPLIT),
        normalizer(ell, CartanKind.NONSPLIT),
        special_linear(ell),
        general_linear(ell),
    ]
    if include_irregular:
        for pattern in IrregularPattern:
            family = irregular(ell, pattern)
            if family is not None:
                families.append(family)
    return families
