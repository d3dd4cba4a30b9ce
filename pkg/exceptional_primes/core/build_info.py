"""Tool and library versions stamped into every report."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache

import mpmath
import numpy
import sympy

from exceptional_primes import __version__
from exceptional_primes.core.config import settings

# Bumped whenever a report document changes shape.
SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class BuildInfo:
    """Versions of the tool and of the libraries that compute its numbers.

    Host names, timestamps and commits are left out so that reports stay
    byte-identical across machines and reruns.
    """

    name: str
    version: str
    schema_version: str
    numpy_version: str
    sympy_version: str
    mpmath_version: str

    def as_dict(self) -> dict[str, str]:
        return asdict(self)


@lru_cache
def load_build_info() -> BuildInfo:
    return BuildInfo(
        name=settings.app_name,
        version=__version__,
        schema_version=SCHEMA_VERSION,
        numpy_version=numpy.__version__,
        sympy_version=sympy.__version__,
        mpmath_version=mpmath.__version__,
    )
