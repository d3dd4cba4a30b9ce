"""Domain-level service exceptions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from exceptional_primes.core.exceptions import (
    EXIT_INPUT_ERROR,
    EXIT_INVARIANT_VIOLATION,
)


@dataclass(eq=False)
class ServiceError(Exception):
    """Base error raised by engine and service code."""

    message: str
    exit_code: int = EXIT_INVARIANT_VIOLATION
    detail: Optional[str] = None
    module: str = "core"

    def __post_init__(self) -> None:
        super().__init__(self.message)

    def __str__(self) -> str:  # pragma: no cover - repr helper
        return self.message


# curve-model


@dataclass(eq=False)
class SingularCurve(ServiceError):
    """Raised when a Weierstrass model has zero discriminant."""

    exit_code: int = EXIT_INPUT_ERROR
    module: str = "curve-model"


@dataclass(eq=False)
class MissingOverride(ServiceError):
    """Raised when p in {2, 3} divides the discriminant without an override."""

    exit_code: int = EXIT_INPUT_ERROR
    module: str = "curve-model"
    prime: int = 0


@dataclass(eq=False)
class InvalidOverride(ServiceError):
    """Raised for overrides that contradict the reduction-type rules."""

    exit_code: int = EXIT_INPUT_ERROR
    module: str = "curve-model"


@dataclass(eq=False)
class CurveInputError(ServiceError):
    """Raised for unparseable curve documents or CSV shorthands."""

    exit_code: int = EXIT_INPUT_ERROR
    module: str = "curve-model"


# frobenius-engine


@dataclass(eq=False)
class BadReduction(ServiceError):
    exit_code: int = EXIT_INPUT_ERROR
    module: str = "frobenius-engine"
    prime: int = 0


@dataclass(eq=False)
class PrimeTooLarge(ServiceError):
    exit_code: int = EXIT_INPUT_ERROR
    module: str = "frobenius-engine"
    prime: int = 0


@dataclass(eq=False)
class WeilBoundViolation(ServiceError):
    """Raised when a computed trace breaks |a_p| <= 2 sqrt(p)."""

    exit_code: int = EXIT_INVARIANT_VIOLATION
    module: str = "frobenius-engine"


@dataclass(eq=False)
class InsufficientTable(ServiceError):
    exit_code: int = EXIT_INPUT_ERROR
    module: str = "frobenius-engine"


@dataclass(eq=False)
class PrimeMismatch(ServiceError):
    exit_code: int = EXIT_INPUT_ERROR
    module: str = "frobenius-engine"


@dataclass(eq=False)
class TraceCacheCorrupt(ServiceError):
    """Raised when any complete line of a cache file fails to parse."""

    exit_code: int = EXIT_INVARIANT_VIOLATION
    module: str = "frobenius-engine"


# gl2-lab


@dataclass(eq=False)
class InvalidEps(ServiceError):
    exit_code: int = EXIT_INPUT_ERROR
    module: str = "gl2-lab"


@dataclass(eq=False)
class InvalidModulus(ServiceError):
    exit_code: int = EXIT_INPUT_ERROR
    module: str = "gl2-lab"


@dataclass(eq=False)
class SizeCapExceeded(ServiceError):
    exit_code: int = EXIT_INPUT_ERROR
    module: str = "gl2-lab"


@dataclass(eq=False)
class NotClosed(ServiceError):
    exit_code: int = EXIT_INPUT_ERROR
    module: str = "gl2-lab"


@dataclass(eq=False)
class ZeroDet(ServiceError):
    exit_code: int = EXIT_INPUT_ERROR
    module: str = "gl2-lab"


# image-classifier


@dataclass(eq=False)
class EmptyTable(ServiceError):
    exit_code: int = EXIT_INPUT_ERROR
    module: str = "image-classifier"


@dataclass(eq=False)
class CharacterNotInSpan(ServiceError):
    """Reported, not fatal: a normalizer character outside the given space."""

    exit_code: int = EXIT_INPUT_ERROR
    module: str = "image-classifier"


# bound-calculus


@dataclass(eq=False)
class NonpositiveInput(ServiceError):
    exit_code: int = EXIT_INPUT_ERROR
    module: str = "bound-calculus"


# chebotarev-lab


@dataclass(eq=False)
class NotFoundWithinBound(ServiceError):
    exit_code: int = EXIT_INPUT_ERROR
    module: str = "chebotarev-lab"


@dataclass(eq=False)
class EmptyData(ServiceError):
    exit_code: int = EXIT_INPUT_ERROR
    module: str = "chebotarev-lab"
