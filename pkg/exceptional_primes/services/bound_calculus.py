"""Explicit bound formulas for exceptional primes, evaluated with mpmath.

Every formula lives in ``FORMULAS`` and is evaluated from string inputs
under ``mp.workdps(settings.bound_precision_digits)``, so a recorded
(formula_id, inputs) pair recomputes to the identical value. Implied
constants come from the active :class:`ConstantsProfile`; they are user
data, not theorems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Optional, Union

import mpmath as mp
import numpy as np

from exceptional_primes.core.config import settings
from exceptional_primes.core.exceptions import InputError
from exceptional_primes.core.logging import get_logger
from exceptional_primes.models.schemas import ConstantsProfile, FieldInvariants
from exceptional_primes.services.arithmetic import (
    next_prime_not_in,
    primes_up_to,
    valuation,
)
from exceptional_primes.services.exceptions import NonpositiveInput
from exceptional_primes.services.gl2_lab import ACCEPTABLE_PRIME_FLOOR

logger = get_logger(__name__)

Number = Union[int, float, Fraction, str, mp.mpf]
Value = Union[int, mp.mpf]


def as_text(value: Number) -> str:
    """Exact textual form of a formula input."""
    if isinstance(value, bool):
        raise TypeError("booleans are not formula inputs")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, mp.mpf):
        return mp.nstr(value, settings.bound_precision_digits)
    return str(value)


def as_inputs(**values: Number) -> dict[str, str]:
    return {name: as_text(value) for name, value in values.items()}


def format_value(value: Value) -> str:
    if isinstance(value, int):
        return str(value)
    return mp.nstr(value, settings.report_digits)


class _Args:
    """Typed access to a formula's string inputs."""

    def __init__(self, formula_id: str, raw: Mapping[str, str]):
        self.formula_id = formula_id
        self.raw = raw

    def _get(self, name: str) -> str:
        try:
            return self.raw[name]
        except KeyError:
            raise InputError(
                f"formula {self.formula_id} needs input {name!r}",
                module="bound-calculus",
            ) from None

    def real(self, name: str) -> mp.mpf:
        text = self._get(name)
        if "/" in text:
            num, den = text.split("/", 1)
            return mp.mpf(int(num)) / int(den)
        return mp.mpf(text)

    def integer(self, name: str) -> int:
        return int(self._get(name))

    def positive(self, name: str) -> mp.mpf:
        value = self.real(name)
        if value <= 0:
            raise NonpositiveInput(
                f"{name} must be positive in {self.formula_id}",
                detail=f"{name}={self.raw[name]}",
            )
        return value

    def log(self, name: str) -> mp.mpf:
        return mp.log(self.positive(name))


@dataclass(frozen=True)
class Formula:
    formula_id: str
    provenance: str
    compute: Callable[[_Args], Value]
    exact: bool = False


FORMULAS: dict[str, Formula] = {}


def _formula(formula_id: str, provenance: str, exact: bool = False):
    def register(fn: Callable[[_Args], Value]) -> Callable[[_Args], Value]:
        FORMULAS[formula_id] = Formula(formula_id, provenance, fn, exact)
        return fn

    return register


def evaluate(formula_id: str, inputs: Mapping[str, str]) -> Value:
    """Evaluate a registered formula on string inputs."""
    formula = FORMULAS.get(formula_id)
    if formula is None:
        raise InputError(
            f"unknown bound formula {formula_id!r}", module="bound-calculus"
        )
    with mp.workdps(settings.bound_precision_digits):
        value = formula.compute(_Args(formula_id, inputs))
        if not formula.exact:
            value = +mp.mpf(value)
    return value


def _loglog(log_n: mp.mpf) -> mp.mpf:
    # log log N clamps to 1 below N = e^e
    return mp.log(log_n) if log_n > mp.e else mp.mpf(1)


def loglog_clamped(N_E: int) -> bool:
    with mp.workdps(settings.bound_precision_digits):
        return not mp.log(mp.mpf(N_E)) > mp.e


def vexc_exponent(d: int) -> Fraction:
    """2 - 2^(1 - d) as an exact rational."""
    if d < 1:
        raise NonpositiveInput(
            "character space dimension must be >= 1", detail=f"d={d}"
        )
    return 2 - Fraction(1, 2 ** (d - 1))


def _sk_exponent_base(a: _Args) -> mp.mpf:
    return a.real("R_K") * mp.mpf(a.integer("n_K")) ** a.integer("r_K")


def _sk_scale(a: _Args) -> mp.mpf:
    return a.positive("c_abs") ** a.integer("n_K")


# Chebotarev layer


@_formula("chebotarev", "least prime norm in a prescribed Frobenius class of L/K (GRH)")
def _chebotarev(a: _Args) -> mp.mpf:
    return a.real("c_cheb") * a.positive("log_disc_L") ** 2


@_formula("disc_chain", "upper bound for log disc of the avoiding extension L'")
def _disc_chain(a: _Args) -> mp.mpf:
    d = a.positive("d")
    log_disc = a.log("abs_disc")
    log_n = mp.log(6 * a.positive("N"))
    return 6 * d * (log_disc + log_n + 4 * log_disc + a.integer("n_K") * mp.log(d))


@_formula("ceb", "least prime in a Frobenius class avoiding primes of norm dividing N")
def _ceb(a: _Args) -> mp.mpf:
    d = a.positive("d")
    inner = a.log("N") + a.log("abs_disc") + a.integer("n_K") * mp.log(d)
    return a.real("c_ceb") * d**2 * inner**2


@_formula(
    "class_group_prime", "prime of K in a given ideal class (Hilbert class field step)"
)
def _class_group_prime(a: _Args) -> mp.mpf:
    return a.real("c_ceb") * (a.integer("h_K") * a.log("abs_disc")) ** 2


# Reducible primes


def _log_sum(a: _Args) -> mp.mpf:
    return a.log("N_E") + a.log("p")


@_formula("redone_product", "product R_E of reducible exceptional primes")
def _redone_product(a: _Args) -> mp.mpf:
    return a.real("c_redone_prod") * a.positive("p") ** 36 * _log_sum(a) ** 12


@_formula("redone_single", "any single reducible exceptional prime")
def _redone_single(a: _Args) -> mp.mpf:
    p_power = a.positive("p") ** a.integer("exponent")
    return a.real("c_redone_single") * p_power * _log_sum(a)


@_formula(
    "frobenius_norm", "norm of the comparison prime with differing 12th power traces"
)
def _frobenius_norm(a: _Args) -> mp.mpf:
    return a.real("c_norm") * a.positive("p") ** 6 * _log_sum(a) ** 2


# Normalizer primes


@_formula(
    "lmv",
    "count of quadratic characters unramified outside additive primes",
    exact=True,
)
def _lmv(a: _Args) -> int:
    return 2 ** (a.integer("a_E") + 2 * a.integer("n_K")) * a.integer("h_K")


@_formula(
    "lmv_two_rank",
    "same count with the class group 2-rank in place of h_K",
    exact=True,
)
def _lmv_two_rank(a: _Args) -> int:
    return 2 ** (a.integer("a_E") + 2 * a.integer("n_K") + a.integer("two_rank"))


def _vexc_base(a: _Args, extra: mp.mpf) -> mp.mpf:
    d = a.integer("d")
    exponent = vexc_exponent(d)
    scale = a.real("c_vexc") * mp.mpf(2) ** d * a.positive("p") ** 3
    base = scale * (_log_sum(a) + extra)
    return base ** (mp.mpf(exponent.numerator) / exponent.denominator)


@_formula("vexc", "product of V-exceptional primes for a d-dimensional character space")
def _vexc(a: _Args) -> mp.mpf:
    return _vexc_base(a, mp.mpf(0))


@_formula("vexc_plus_d", "V-exceptional product keeping the +d term of the norm bound")
def _vexc_plus_d(a: _Args) -> mp.mpf:
    return _vexc_base(a, mp.mpf(a.integer("d")))


@_formula(
    "boot_implied", "bootstrap bound on the smallest acceptable unexceptional prime"
)
def _boot_implied(a: _Args) -> mp.mpf:
    return a.real("c_boot") * (a.log("A") + a.log("p") + 1)


# Final bounds


@_formula("effective_single", "any exceptional prime (effective, GRH)")
def _effective_single(a: _Args) -> mp.mpf:
    log_n = a.log("N_E")
    return a.real("c_eff_single") * log_n * _loglog(log_n) ** 3


@_formula("effective_product", "product of exceptional primes (effective, GRH)")
def _effective_product(a: _Args) -> mp.mpf:
    log_n = a.log("N_E")
    ll = _loglog(log_n)
    a_e = a.integer("a_E")
    return (
        a.real("c_eff_prod")
        * mp.mpf(4) ** a_e
        * log_n**14
        * (a_e + ll) ** 6
        * ll**36
    )


@_formula(
    "effective_product_simplified",
    "product of exceptional primes, (log N_E)^21 form",
)
def _effective_product_simplified(a: _Args) -> mp.mpf:
    return a.real("c_eff_prod") * mp.mpf(4) ** a.integer("a_E") * a.log("N_E") ** 21


@_formula("ineffective_single", "any exceptional prime (ineffective constant)")
def _ineffective_single(a: _Args) -> mp.mpf:
    return a.real("c_ineff_single") * a.log("N_E")


@_formula("ineffective_product", "product of exceptional primes (ineffective constant)")
def _ineffective_product(a: _Args) -> mp.mpf:
    return a.real("c_ineff_prod") * mp.mpf(4) ** a.integer("a_E") * a.log("N_E") ** 14


def _sk_single(a: _Args) -> mp.mpf:
    class_term = a.integer("h_K") * a.log("abs_disc")
    return mp.exp(_sk_scale(a) * (_sk_exponent_base(a) + class_term))


def _sk_product(a: _Args) -> mp.mpf:
    class_term = (a.integer("h_K") * a.log("abs_disc")) ** 2
    return mp.exp(_sk_scale(a) * (_sk_exponent_base(a) + class_term))


@_formula("sk_single", "exceptional primes of the CM comparison set S_K, single")
def _sk_single_formula(a: _Args) -> mp.mpf:
    return _sk_single(a)


@_formula("sk_product", "exceptional primes of the CM comparison set S_K, product")
def _sk_product_formula(a: _Args) -> mp.mpf:
    return _sk_product(a)


@_formula("explicit_single", "any exceptional prime with explicit field dependence")
def _explicit_single(a: _Args) -> mp.mpf:
    log_n = a.log("N_E")
    return a.real("c_explicit") * log_n * _loglog(log_n) ** 3 + _sk_single(a)


@_formula(
    "explicit_product",
    "product of exceptional primes with explicit field dependence",
)
def _explicit_product(a: _Args) -> mp.mpf:
    log_n = a.log("N_E")
    ll = _loglog(log_n)
    a_e = a.integer("a_E")
    return (
        a.real("c_explicit")
        * mp.mpf(4) ** a_e
        * log_n**13
        * (a_e + ll) ** 3
        * ll**36
        * _sk_product(a)
    )


@_formula("lenstra", "class number upper bound |disc K|^(3/2)")
def _lenstra(a: _Args) -> mp.mpf:
    disc = a.positive("abs_disc")
    return disc * mp.sqrt(disc)


# Public evaluators


def _field_inputs(inv: FieldInvariants) -> dict[str, Number]:
    return {
        "n_K": inv.n_K,
        "r_K": inv.r_K,
        "R_K": inv.R_K,
        "h_K": inv.h_K,
        "abs_disc": inv.abs_disc,
    }


def chebotarev_bound(log_disc_L: Number, profile: ConstantsProfile) -> mp.mpf:
    return evaluate(
        "chebotarev", as_inputs(log_disc_L=log_disc_L, c_cheb=profile.c_cheb)
    )


def disc_chain_bound(d: int, N: int, inv: FieldInvariants) -> mp.mpf:
    return evaluate(
        "disc_chain", as_inputs(d=d, N=N, abs_disc=inv.abs_disc, n_K=inv.n_K)
    )


def ceb_bound(
    d: int, N: Number, inv: FieldInvariants, profile: ConstantsProfile
) -> mp.mpf:
    return evaluate(
        "ceb",
        as_inputs(d=d, N=N, abs_disc=inv.abs_disc, n_K=inv.n_K, c_ceb=profile.c_ceb),
    )


def class_group_prime_bound(inv: FieldInvariants, profile: ConstantsProfile) -> mp.mpf:
    return evaluate(
        "class_group_prime",
        as_inputs(h_K=inv.h_K, abs_disc=inv.abs_disc, c_ceb=profile.c_ceb),
    )


def redone_bounds(
    p: int, N_E: int, profile: ConstantsProfile, exponent: Optional[int] = None
) -> tuple[mp.mpf, mp.mpf]:
    """(R_E bound, single reducible prime bound)."""
    exponent = profile.redone_single_exponent if exponent is None else exponent
    product = evaluate(
        "redone_product", as_inputs(p=p, N_E=N_E, c_redone_prod=profile.c_redone_prod)
    )
    single = evaluate(
        "redone_single",
        as_inputs(
            p=p,
            N_E=N_E,
            exponent=exponent,
            c_redone_single=profile.c_redone_single,
        ),
    )
    return product, single


def frobenius_norm_bound(p: int, N_E: int, profile: ConstantsProfile) -> mp.mpf:
    return evaluate("frobenius_norm", as_inputs(p=p, N_E=N_E, c_norm=profile.c_norm))


def lmv_bound(a_E: int, inv: FieldInvariants) -> int:
    return evaluate("lmv", as_inputs(a_E=a_E, n_K=inv.n_K, h_K=inv.h_K))


def class_group_two_rank(inv: FieldInvariants) -> int:
    if inv.class_group_2_rank is not None:
        return inv.class_group_2_rank
    return valuation(inv.h_K, 2)


def lmv_bound_two_rank(a_E: int, inv: FieldInvariants) -> int:
    return evaluate(
        "lmv_two_rank",
        as_inputs(a_E=a_E, n_K=inv.n_K, two_rank=class_group_two_rank(inv)),
    )


def vexc_bound(
    d: int, p: int, N_E: int, profile: ConstantsProfile, plus_d: bool = False
) -> mp.mpf:
    formula_id = "vexc_plus_d" if plus_d else "vexc"
    return evaluate(formula_id, as_inputs(d=d, p=p, N_E=N_E, c_vexc=profile.c_vexc))


@dataclass(frozen=True)
class EffectiveBounds:
    single: mp.mpf
    product: mp.mpf
    product_simplified: mp.mpf


def effective_bounds(N_E: int, a_E: int, profile: ConstantsProfile) -> EffectiveBounds:
    product = as_inputs(N_E=N_E, a_E=a_E, c_eff_prod=profile.c_eff_prod)
    return EffectiveBounds(
        evaluate(
            "effective_single",
            as_inputs(N_E=N_E, c_eff_single=profile.c_eff_single),
        ),
        evaluate("effective_product", product),
        evaluate("effective_product_simplified", product),
    )


def ineffective_bounds(
    N_E: int, a_E: int, profile: ConstantsProfile
) -> tuple[mp.mpf, mp.mpf]:
    single = evaluate(
        "ineffective_single", as_inputs(N_E=N_E, c_ineff_single=profile.c_ineff_single)
    )
    product = evaluate(
        "ineffective_product",
        as_inputs(N_E=N_E, a_E=a_E, c_ineff_prod=profile.c_ineff_prod),
    )
    return single, product


def explicit_constants_bound(
    inv: FieldInvariants, profile: ConstantsProfile, c_abs: Optional[Number] = None
) -> tuple[mp.mpf, mp.mpf]:
    """(S_K single, S_K product) for the explicit-constant theorem."""
    if c_abs is None:
        c_abs = profile.c_abs
    inputs = as_inputs(c_abs=c_abs, **_field_inputs(inv))
    return evaluate("sk_single", inputs), evaluate("sk_product", inputs)


def explicit_effective_bounds(
    N_E: int, a_E: int, inv: FieldInvariants, profile: ConstantsProfile
) -> tuple[mp.mpf, mp.mpf]:
    inputs = as_inputs(
        N_E=N_E,
        a_E=a_E,
        c_explicit=profile.c_explicit,
        c_abs=profile.c_abs,
        **_field_inputs(inv),
    )
    return evaluate("explicit_single", inputs), evaluate("explicit_product", inputs)


def lenstra_class_bound(abs_disc: int) -> mp.mpf:
    return evaluate("lenstra", as_inputs(abs_disc=abs_disc))


def lenstra_warning(inv: FieldInvariants) -> Optional[str]:
    """Warning text when h_K exceeds |disc K|^(3/2)."""
    bound = lenstra_class_bound(inv.abs_disc)
    if inv.h_K > bound:
        message = (
            f"h_K = {inv.h_K} exceeds |disc K|^(3/2) = {format_value(bound)}; "
            "field invariants are inconsistent"
        )
        logger.warning(message)
        return message
    return None


# Primes and the bootstrap check


def smallest_acceptable_prime(
    excluded: Iterable[int] = (), ramified_primes: Iterable[int] = ()
) -> int:
    """Smallest prime >= 53 outside ``excluded`` and unramified in K."""
    avoid = set(excluded) | set(ramified_primes)
    return next_prime_not_in(ACCEPTABLE_PRIME_FLOOR, avoid)


@lru_cache(maxsize=8)
def chebyshev_theta_table(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """Primes <= limit with the running sums of their logs (float64)."""
    primes = primes_up_to(limit)
    theta = np.cumsum(np.log(primes.astype(np.float64)))
    theta.flags.writeable = False
    return primes, theta


def _log_sum_of_primes(primes: Iterable[int]) -> mp.mpf:
    return mp.fsum(mp.log(mp.mpf(int(q))) for q in primes)


def chebyshev_theta(x: int) -> mp.mpf:
    """Sum of log q over primes q <= x."""
    with mp.workdps(settings.bound_precision_digits):
        return +_log_sum_of_primes(primes_up_to(x) if x >= 2 else ())


@dataclass(frozen=True)
class BootResult:
    S: tuple[int, ...]
    A: str
    b: str
    p: int
    theta_p: mp.mpf
    rhs: mp.mpf
    implied_p_bound: mp.mpf
    holds: bool
    chain_applicable: bool
    chain_holds: bool
    premise_holds: bool
    inputs: dict[str, str]


def _premise_holds(S: tuple[int, ...], A: str, b: str, p: int, rhs: mp.mpf) -> bool:
    # prod(S) <= A * p^b, exactly when A and b are integers
    try:
        a_int, b_int = int(A), int(b)
    except ValueError:
        a_int = b_int = None
    if a_int is not None and b_int is not None and b_int >= 0:
        return math.prod(S) <= a_int * p**b_int
    args = _Args("boot", {"A": A, "b": b})
    return rhs <= args.log("A") + args.real("b") * mp.log(p)


def boot_check(
    S: Iterable[int],
    A: Number,
    b: Number,
    profile: ConstantsProfile,
    ramified_primes: Iterable[int] = (),
) -> BootResult:
    """Prime-sum mechanics behind the bootstrap bound.

    p is the smallest acceptable prime outside S. When S contains every
    prime below p, theta(p - 1) <= sum of log q over S; both sides are
    summed over the same sorted primes, so the equality case is exact.
    """
    primes = tuple(sorted(set(int(q) for q in S)))
    a_text, b_text = as_text(A), as_text(b)
    with mp.workdps(settings.bound_precision_digits):
        if _Args("boot", {"A": a_text}).real("A") < 1:
            raise NonpositiveInput("boot check needs A >= 1", detail=f"A={a_text}")
        p = smallest_acceptable_prime(primes, ramified_primes)
        below = [int(q) for q in primes_up_to(p - 1)]
        theta_p = +_log_sum_of_primes(below)
        rhs = +_log_sum_of_primes(primes)
        chain_applicable = set(below) <= set(primes)
        premise = _premise_holds(primes, a_text, b_text, p, rhs)

    inputs = as_inputs(A=a_text, p=p, c_boot=profile.c_boot)
    implied = evaluate("boot_implied", inputs)
    result = BootResult(
        S=primes,
        A=a_text,
        b=b_text,
        p=p,
        theta_p=theta_p,
        rhs=rhs,
        implied_p_bound=implied,
        holds=p <= implied,
        chain_applicable=chain_applicable,
        chain_holds=theta_p <= rhs,
        premise_holds=premise,
        inputs=inputs,
    )
    logger.debug(
        "Boot check: p=%d implied=%s holds=%s", p, format_value(implied), result.holds
    )
    return result
