"""Pydantic models for JSON inputs and report documents."""

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .enums import (
    CompareMode,
    ImageVerdict,
    OutputFormat,
    ReductionKind,
    ReductionSource,
)

_KIND_ALIASES = {
    "split": ReductionKind.MULTIPLICATIVE_SPLIT,
    "nonsplit": ReductionKind.MULTIPLICATIVE_NONSPLIT,
    "multiplicative_split": ReductionKind.MULTIPLICATIVE_SPLIT,
    "multiplicative_nonsplit": ReductionKind.MULTIPLICATIVE_NONSPLIT,
}


class ErrorResponse(BaseModel):
    """Error document written to stderr."""

    error: str = Field(..., description="Error message")
    detail: Optional[str] = Field(None, description="Additional error details")
    module: str = Field(..., description="Module the error originated in")


# Inputs


class OverrideSpec(BaseModel):
    """Reduction type and conductor exponent supplied for one prime."""

    model_config = ConfigDict(extra="forbid")

    kind: ReductionKind = Field(..., description="Reduction type")
    exp: int = Field(..., ge=0, description="Conductor exponent")

    @field_validator("kind", mode="before")
    @classmethod
    def _normalize_kind(cls, value):
        if isinstance(value, str):
            key = value.strip().lower()
            return _KIND_ALIASES.get(key, key)
        return value


class CurveInput(BaseModel):
    """Curve document: a-invariants, optional overrides and label."""

    model_config = ConfigDict(extra="forbid")

    ainvs: List[int] = Field(
        ..., min_length=5, max_length=5, description="[a1,a2,a3,a4,a6]"
    )
    overrides: Dict[int, OverrideSpec] = Field(
        default_factory=dict, description="Prime -> reduction override"
    )
    label: Optional[str] = Field(None, description="Passthrough label, echoed verbatim")

    @field_validator("overrides")
    @classmethod
    def _primes_positive(
        cls, value: Dict[int, OverrideSpec]
    ) -> Dict[int, OverrideSpec]:
        for p in value:
            if p < 2:
                raise ValueError(f"override key {p} is not a prime")
        return value


class FieldInvariants(BaseModel):
    """Degree, unit rank, regulator, class number and discriminant of K."""

    model_config = ConfigDict(extra="forbid")

    n_K: int = Field(1, ge=1, description="Degree [K:Q]")
    r_K: int = Field(0, ge=0, description="Unit rank")
    R_K: float = Field(1.0, gt=0, description="Regulator")
    h_K: int = Field(1, ge=1, description="Class number")
    abs_disc: int = Field(1, ge=1, description="|disc K|")
    ramified_primes: List[int] = Field(
        default_factory=list, description="Primes ramified in K"
    )
    class_group_2_rank: Optional[int] = Field(
        None, ge=0, description="2-rank of the class group, when known"
    )

    @model_validator(mode="after")
    def _rational_field_collapses(self):
        if self.n_K == 1:
            if (
                self.r_K != 0
                or self.R_K != 1
                or self.h_K != 1
                or self.abs_disc != 1
                or self.ramified_primes
            ):
                raise ValueError(
                    "n_K = 1 requires r_K = 0, R_K = 1, h_K = 1, abs_disc = 1 "
                    "and no ramified primes"
                )
        self.ramified_primes = sorted(set(self.ramified_primes))
        return self


class ConstantsProfile(BaseModel):
    """Numeric stand-ins for the implied constants of every bound formula."""

    model_config = ConfigDict(extra="forbid")

    c_cheb: float = Field(1.0, gt=0)
    c_ceb: float = Field(1.0, gt=0)
    c_redone_prod: float = Field(1.0, gt=0)
    c_redone_single: float = Field(1.0, gt=0)
    c_vexc: float = Field(1.0, gt=0)
    c_boot: float = Field(1.0, gt=0)
    c_eff_single: float = Field(1.0, gt=0)
    c_eff_prod: float = Field(1.0, gt=0)
    c_explicit: float = Field(1.0, gt=0)
    c_abs: float = Field(1.0, gt=0)
    c_norm: float = Field(1.0, gt=0)
    c_ineff_single: float = Field(1.0, gt=0)
    c_ineff_prod: float = Field(1.0, gt=0)
    redone_single_exponent: int = Field(3, description="3 or 6")

    @field_validator("redone_single_exponent")
    @classmethod
    def _exponent_choice(cls, value: int) -> int:
        if value not in (3, 6):
            raise ValueError("redone_single_exponent must be 3 or 6")
        return value

    @property
    def is_default(self) -> bool:
        return self == ConstantsProfile()


class AnalysisConfig(BaseModel):
    """Per-run configuration of the analyze pipeline."""

    model_config = ConfigDict(extra="forbid")

    curve: CurveInput
    trace_bound: int = Field(10000, ge=100)
    scan_bound: Optional[int] = Field(None, ge=37)
    profile: ConstantsProfile = Field(default_factory=ConstantsProfile)
    profile_path: Optional[str] = None
    v_basis: List[int] = Field(
        default_factory=list, description="Character space basis"
    )
    output_format: OutputFormat = OutputFormat.JSON
    jobs: int = Field(1, ge=1)


class BoundsRequest(BaseModel):
    """Inputs of the bounds ladder beyond the constants profile."""

    model_config = ConfigDict(extra="forbid")

    invariants: FieldInvariants = Field(default_factory=FieldInvariants)
    N_E: int = Field(1, ge=1, description="Conductor norm")
    a_E: int = Field(0, ge=0, description="Number of additive primes")
    boot_set: List[int] = Field(
        default_factory=list, description="Set S of the boot check"
    )
    boot_A: Optional[str] = Field(None, description="A >= 1 (decimal string)")
    boot_b: float = 36.0

    @field_validator("boot_A")
    @classmethod
    def _decimal_text(cls, value: Optional[str]) -> Optional[str]:
        if value is None:
            return value
        try:
            number = float(value)
        except ValueError:
            raise ValueError(
                f"boot_A must be a decimal number, got {value!r}"
            ) from None
        if number < 1:
            raise ValueError("boot_A must be >= 1")
        return value.strip()


# Reports


class ToolInfo(BaseModel):
    name: str
    version: str
    schema_version: str
    numpy_version: str
    sympy_version: str
    mpmath_version: str


class CurvePayload(BaseModel):
    ainvs: List[int]
    curve_id: str
    label: Optional[str] = None
    b2: int
    b4: int
    b6: int
    b8: int
    c4: int
    c6: int
    disc: int
    j_num: int
    j_den: int
    j: str


class ReductionEntryPayload(BaseModel):
    p: int
    kind: ReductionKind
    conductor_exponent: int
    source: ReductionSource


class ReductionProfilePayload(BaseModel):
    entries: List[ReductionEntryPayload]
    N_E: int
    a_E: int


class TraceTableSummary(BaseModel):
    bound: int
    good_primes: int
    bad_primes: List[int]
    skipped_primes: List[int]


class WitnessPayload(BaseModel):
    sampled: int
    w_irred: Optional[int] = None
    w_split: Optional[int] = None
    w_bigorder: Optional[int] = None
    zero_trace_primes: int
    zero_trace_fraction: str
    det_surjective: bool
    nonsquare_disc_count: int
    order_classes: List[str]


class CharacterSearchPayload(BaseModel):
    searched: List[int]
    matches: List[int]
    insufficient: List[int]
    ambiguous: bool


class ImageEntryPayload(BaseModel):
    ell: int
    verdict: ImageVerdict
    witnesses: WitnessPayload
    character: Optional[int] = None
    character_search: Optional[CharacterSearchPayload] = None
    note: str = ""


class ImageReportPayload(BaseModel):
    curve: str
    scan_bound: int
    trace_bound: int
    entries: List[ImageEntryPayload]


class VExceptionalPayload(BaseModel):
    basis: List[int]
    span: List[int]
    groups: Dict[str, List[int]]
    not_in_span: List[List[int]]


class BoundEntry(BaseModel):
    """One evaluated bound with everything needed to recompute it."""

    formula_id: str = Field(..., description="Registry key of the formula")
    inputs: Dict[str, str] = Field(..., description="Exact inputs as strings")
    value: str = Field(..., description="Value to the report precision")
    provenance: str = Field(..., description="What the formula bounds")


class BootCheckPayload(BaseModel):
    S: List[int]
    A: str
    b: str
    p: int
    theta_p: str
    rhs: str
    implied_p_bound: str
    holds: bool
    chain_applicable: bool
    chain_holds: bool
    premise_holds: bool


class BoundReport(BaseModel):
    profile: ConstantsProfile
    profile_is_default: bool
    invariants: FieldInvariants
    N_E: int
    a_E: int
    probe_prime: int
    loglog_clamped: bool
    entries: List[BoundEntry]
    boot: BootCheckPayload
    disclaimers: List[str]
    warnings: List[str] = Field(default_factory=list)


class BoundComparison(BaseModel):
    bound_id: str
    bound_value: str
    quantity: str
    holds: bool


class CandidatePayload(BaseModel):
    ell: int
    verdict: ImageVerdict
    character: Optional[int] = None


class ComparisonVerdicts(BaseModel):
    candidates: List[CandidatePayload]
    candidate_product: str
    single: List[BoundComparison]
    product: List[BoundComparison]


class AnalysisReport(BaseModel):
    tool: ToolInfo
    curve: CurvePayload
    reduction: ReductionProfilePayload
    trace_table: TraceTableSummary
    image: ImageReportPayload
    v_exceptional: Optional[VExceptionalPayload] = None
    bounds: BoundReport
    verdicts: ComparisonVerdicts


class CertificatePayload(BaseModel):
    p: int
    mode: CompareMode
    difference: int
    bound: str
    clause: str


class DistinguishingPayload(BaseModel):
    mode: CompareMode
    bound: int
    compared_primes: int
    found: bool
    prime: Optional[int] = None
    difference: Optional[int] = None
    certificate: Optional[CertificatePayload] = None


class CompareReport(BaseModel):
    tool: ToolInfo
    curve_a: CurvePayload
    curve_b: CurvePayload
    bound: int
    results: List[DistinguishingPayload]


class OracleCheckPayload(BaseModel):
    ell: int
    family: str
    order: int
    subgroup_tag: str
    expected_tag: str
    verdict: ImageVerdict
    character: Optional[int] = None
    passed: bool


class ProjectiveOrderCheck(BaseModel):
    ell: int
    elements: int
    mismatches: int


class Gl2SelftestReport(BaseModel):
    tool: ToolInfo
    ells: List[int]
    checks: List[OracleCheckPayload]
    projective_order_checks: List[ProjectiveOrderCheck]
    passed: bool


class EnvelopePayload(BaseModel):
    """Empirical least-prime envelope of a Chebotarev lab sweep."""

    label: str
    count: int
    max_ratio: str
    worst_field: int
    worst_target: str
    worst_prime: int
    percentiles: Dict[str, str]
