"""Centralized enum definitions for tags, verdicts and modes."""

from enum import Enum


class ReductionKind(str, Enum):
    """Reduction type of a curve at a prime."""

    GOOD = "good"
    MULTIPLICATIVE_SPLIT = "multiplicative-split"
    MULTIPLICATIVE_NONSPLIT = "multiplicative-nonsplit"
    ADDITIVE = "additive"

    @property
    def is_multiplicative(self) -> bool:
        return self in (
            ReductionKind.MULTIPLICATIVE_SPLIT,
            ReductionKind.MULTIPLICATIVE_NONSPLIT,
        )


class ReductionSource(str, Enum):
    """Where a reduction entry came from."""

    COMPUTED = "computed"
    USER_OVERRIDE = "user-override"


class CompareMode(str, Enum):
    """Which Frobenius polynomial is compared between two curves."""

    PLAIN = "plain"
    ADAMS12 = "adams12"


class CartanKind(str, Enum):
    SPLIT = "split"
    NONSPLIT = "nonsplit"


class SubgroupTag(str, Enum):
    """Case of the subgroup dichotomy a closed subgroup falls into."""

    REDUCIBLE = "reducible"
    CARTAN_ONLY = "cartan-only"
    NORMALIZER_NOT_CARTAN = "normalizer-not-cartan"
    CONTAINS_SL2 = "contains-sl2"
    IRREGULAR = "irregular"
    OTHER = "other"


class IrregularPattern(str, Enum):
    A4 = "A4"
    S4 = "S4"
    A5 = "A5"


class ProjectiveOrderClass(str, Enum):
    """Projective order fingerprint read off (trace, det)."""

    ONE_OR_ELL = "1-or-ell"
    TWO = "2"
    THREE = "3"
    FOUR = "4"
    FIVE = "5"
    LARGE = ">5-or-ell"


class SubgroupFamilyKind(str, Enum):
    """Parametric subgroup families of GL2(F_ell)."""

    BOREL = "borel"
    SPLIT_CARTAN = "split-cartan"
    NONSPLIT_CARTAN = "nonsplit-cartan"
    SPLIT_NORMALIZER = "split-normalizer"
    NONSPLIT_NORMALIZER = "nonsplit-normalizer"
    SPECIAL_LINEAR = "special-linear"
    GENERAL_LINEAR = "general-linear"
    IRREGULAR_A4 = "irregular-a4"
    IRREGULAR_S4 = "irregular-s4"
    IRREGULAR_A5 = "irregular-a5"


class ImageVerdict(str, Enum):
    """Per-ell verdict of the witness-based image classifier."""

    SURJECTIVE = "surjective"
    REDUCIBLE_CANDIDATE = "reducible-candidate"
    NORMALIZER_CANDIDATE = "normalizer-candidate"
    IRREGULAR_CANDIDATE = "irregular-candidate"
    UNDETERMINED = "undetermined"

    @property
    def is_candidate(self) -> bool:
        return self not in (ImageVerdict.SURJECTIVE, ImageVerdict.UNDETERMINED)


class ChebotarevTarget(str, Enum):
    INERT = "inert"
    SPLIT = "split"


class LogDiscMode(str, Enum):
    """How the cyclotomic log-discriminant is measured."""

    PROXY = "proxy"
    EXACT = "exact"


class OutputFormat(str, Enum):
    JSON = "json"
    TEXT = "text"
