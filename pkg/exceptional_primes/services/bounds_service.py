"""Bound ladder: every evaluated bound with the inputs that produced it."""

from __future__ import annotations

from typing import Iterable, Optional

import mpmath as mp

from exceptional_primes.core.config import settings
from exceptional_primes.core.exceptions import InvariantViolation
from exceptional_primes.core.logging import get_logger
from exceptional_primes.models.schemas import (
    BootCheckPayload,
    BoundEntry,
    BoundReport,
    BoundsRequest,
    ConstantsProfile,
    FieldInvariants,
)
from exceptional_primes.services.bound_calculus import (
    FORMULAS,
    BootResult,
    Number,
    Value,
    as_inputs,
    boot_check,
    class_group_two_rank,
    evaluate,
    format_value,
    lenstra_warning,
    loglog_clamped,
    smallest_acceptable_prime,
)

logger = get_logger(__name__)

PROFILE_DISCLAIMER = (
    "Bound values depend on the active constants profile; the implied "
    "constants are user data, not proven values."
)
DEFAULT_PROFILE_DISCLAIMER = (
    "Default constants profile in use: every implied constant is set to 1."
)
LOGLOG_NOTE = "log log N_E clamped to 1 because N_E < e^e"


class BoundLadder:
    """Ordered record of evaluated bounds, addressable by key."""

    def __init__(self) -> None:
        self.entries: list[BoundEntry] = []
        self._values: dict[str, Value] = {}

    def add(
        self, formula_id: str, key: Optional[str] = None, **inputs: Number
    ) -> Value:
        raw = as_inputs(**inputs)
        value = evaluate(formula_id, raw)
        self.entries.append(
            BoundEntry(
                formula_id=formula_id,
                inputs=raw,
                value=format_value(value),
                provenance=FORMULAS[formula_id].provenance,
            )
        )
        self._values[key or formula_id] = value
        return value

    def value(self, key: str) -> Value:
        return self._values[key]

    def __contains__(self, key: str) -> bool:
        return key in self._values

    @staticmethod
    def recompute(entry: BoundEntry) -> Value:
        return evaluate(entry.formula_id, entry.inputs)

    def verify(self) -> None:
        """Raise if any recorded value no longer recomputes from its inputs."""
        for entry in self.entries:
            again = format_value(self.recompute(entry))
            if again != entry.value:
                raise InvariantViolation(
                    f"bound {entry.formula_id} does not recompute",
                    detail=f"recorded {entry.value}, recomputed {again}",
                    module="bound-calculus",
                )


def vexc_dimensions(a_E: int, inv: FieldInvariants) -> range:
    """d = 1 .. a_E + 2 n_K + ceil(log2 h_K)."""
    top = a_E + 2 * inv.n_K + (inv.h_K - 1).bit_length()
    return range(1, top + 1)


def default_boot_A(N_E: int) -> mp.mpf:
    with mp.workdps(settings.bound_precision_digits):
        return +max(mp.mpf(1), mp.log(mp.mpf(N_E)) ** 12)


def _boot_payload(result: BootResult) -> BootCheckPayload:
    return BootCheckPayload(
        S=list(result.S),
        A=result.A,
        b=result.b,
        p=result.p,
        theta_p=format_value(result.theta_p),
        rhs=format_value(result.rhs),
        implied_p_bound=format_value(result.implied_p_bound),
        holds=result.holds,
        chain_applicable=result.chain_applicable,
        chain_holds=result.chain_holds,
        premise_holds=result.premise_holds,
    )


class BoundsService:
    """Evaluates the full bound ladder for one (field, curve data, profile)."""

    def __init__(self, profile: Optional[ConstantsProfile] = None):
        self.profile = profile or ConstantsProfile()

    def build_ladder(
        self,
        inv: FieldInvariants,
        N_E: int,
        a_E: int,
    ) -> tuple[BoundLadder, int]:
        """Every formula of the ladder, evaluated at the probe prime."""
        profile = self.profile
        ladder = BoundLadder()
        p = smallest_acceptable_prime(ramified_primes=inv.ramified_primes)
        d = p**3
        N = p * N_E
        field = {"n_K": inv.n_K, "abs_disc": inv.abs_disc}

        log_disc_L = ladder.add("disc_chain", d=d, N=N, **field)
        ladder.add("chebotarev", log_disc_L=log_disc_L, c_cheb=profile.c_cheb)
        ladder.add("ceb", d=d, N=N, c_ceb=profile.c_ceb, **field)
        if inv.abs_disc > 1:
            ladder.add(
                "class_group_prime",
                h_K=inv.h_K,
                abs_disc=inv.abs_disc,
                c_ceb=profile.c_ceb,
            )

        curve = {"p": p, "N_E": N_E}
        ladder.add("redone_product", c_redone_prod=profile.c_redone_prod, **curve)
        for exponent in (3, 6):
            ladder.add(
                "redone_single",
                key=f"redone_single[e={exponent}]",
                exponent=exponent,
                c_redone_single=profile.c_redone_single,
                **curve,
            )
        ladder.add("frobenius_norm", c_norm=profile.c_norm, **curve)

        ladder.add("lmv", a_E=a_E, n_K=inv.n_K, h_K=inv.h_K)
        ladder.add(
            "lmv_two_rank", a_E=a_E, n_K=inv.n_K, two_rank=class_group_two_rank(inv)
        )
        for dim in vexc_dimensions(a_E, inv):
            vexc = {"d": dim, "c_vexc": profile.c_vexc, **curve}
            ladder.add("vexc", key=f"vexc[d={dim}]", **vexc)
            ladder.add("vexc_plus_d", key=f"vexc_plus_d[d={dim}]", **vexc)

        conductor = {"N_E": N_E}
        ladder.add("effective_single", c_eff_single=profile.c_eff_single, **conductor)
        product = {"a_E": a_E, "c_eff_prod": profile.c_eff_prod, **conductor}
        ladder.add("effective_product", **product)
        ladder.add("effective_product_simplified", **product)
        ladder.add(
            "ineffective_single", c_ineff_single=profile.c_ineff_single, **conductor
        )
        ladder.add(
            "ineffective_product",
            a_E=a_E,
            c_ineff_prod=profile.c_ineff_prod,
            **conductor,
        )

        invariants = {
            "n_K": inv.n_K,
            "r_K": inv.r_K,
            "R_K": inv.R_K,
            "h_K": inv.h_K,
            "abs_disc": inv.abs_disc,
            "c_abs": profile.c_abs,
        }
        ladder.add("sk_single", **invariants)
        ladder.add("sk_product", **invariants)
        explicit = {
            "N_E": N_E,
            "a_E": a_E,
            "c_explicit": profile.c_explicit,
            **invariants,
        }
        ladder.add("explicit_single", **explicit)
        ladder.add("explicit_product", **explicit)
        ladder.add("lenstra", abs_disc=inv.abs_disc)
        return ladder, p

    def build_report(
        self,
        request: BoundsRequest,
        boot_set: Optional[Iterable[int]] = None,
        extra_warnings: Iterable[str] = (),
    ) -> tuple[BoundReport, BoundLadder]:
        inv = request.invariants
        ladder, p = self.build_ladder(inv, request.N_E, request.a_E)

        boot_A = request.boot_A
        if boot_A is None:
            boot_A = default_boot_A(request.N_E)
        boot_b = request.boot_b
        if boot_b == int(boot_b):
            boot_b = int(boot_b)
        S = request.boot_set if boot_set is None else list(boot_set)
        boot = boot_check(S, boot_A, boot_b, self.profile, inv.ramified_primes)
        ladder.add("boot_implied", **boot.inputs)
        ladder.verify()

        disclaimers = [PROFILE_DISCLAIMER]
        if self.profile.is_default:
            disclaimers.append(DEFAULT_PROFILE_DISCLAIMER)
            logger.warning(DEFAULT_PROFILE_DISCLAIMER)
        warnings = list(extra_warnings)
        clamped = loglog_clamped(request.N_E)
        if clamped:
            warnings.append(LOGLOG_NOTE)
        lenstra = lenstra_warning(inv)
        if lenstra:
            warnings.append(lenstra)

        logger.info(
            "Bound ladder: %d entries at probe prime %d (N_E=%d, a_E=%d)",
            len(ladder.entries),
            p,
            request.N_E,
            request.a_E,
        )
        report = BoundReport(
            profile=self.profile,
            profile_is_default=self.profile.is_default,
            invariants=inv,
            N_E=request.N_E,
            a_E=request.a_E,
            probe_prime=p,
            loglog_clamped=clamped,
            entries=ladder.entries,
            boot=_boot_payload(boot),
            disclaimers=disclaimers,
            warnings=warnings,
        )
        return report, ladder
