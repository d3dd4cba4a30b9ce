"""Shared pytest fixtures for the exceptional-primes test suite."""

from __future__ import annotations

import numpy as np
import pytest

from exceptional_primes.cli import dependencies as dependency_cache
from exceptional_primes.core.config import settings
from exceptional_primes.services.curve_model import (
    CurveQ,
    build_curve,
    reduction_profile,
)
from exceptional_primes.services.frobenius_engine import FrobeniusEngine, TraceTable

# Conductor 11, rational 5-torsion.
AINVS_11A = (0, -1, 1, -10, -20)
# Conductor 37, surjective at every ell.
AINVS_37A = (0, 0, 1, -1, 0)

TRACES_11A = {2: -2, 3: -1, 5: 1, 7: -2, 13: 4, 17: -2, 19: 0, 23: -1, 29: 0, 31: 7}
TRACES_37A = {
    2: -2, 3: -3, 5: -2, 7: -1, 11: -5, 13: -2, 17: 0, 19: 0, 23: 2, 29: 6, 31: -4
}


@pytest.fixture(autouse=True)
def reset_dependency_singletons(tmp_path, monkeypatch):
    """Ensure cached services and trace caches do not leak between tests."""

    monkeypatch.setattr(settings, "cache_dir", str(tmp_path / "exc-cache"))
    dependency_cache.reset_dependency_caches()
    yield
    dependency_cache.reset_dependency_caches()


@pytest.fixture()
def curve_11a() -> CurveQ:
    return build_curve(*AINVS_11A)


@pytest.fixture()
def curve_37a() -> CurveQ:
    return build_curve(*AINVS_37A)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture()
def engine() -> FrobeniusEngine:
    return FrobeniusEngine(cache=None)


def _table(ainvs: tuple[int, ...], bound: int) -> TraceTable:
    curve = build_curve(*ainvs)
    engine = FrobeniusEngine(cache=None)
    return engine.build_table(curve, bound, reduction_profile(curve))


@pytest.fixture(scope="session")
def table_11a() -> TraceTable:
    return _table(AINVS_11A, 10000)


@pytest.fixture(scope="session")
def table_37a() -> TraceTable:
    return _table(AINVS_37A, 10000)
