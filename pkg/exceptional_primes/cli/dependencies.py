"""Cached service singletons for the CLI."""

from functools import lru_cache
from typing import Optional

from exceptional_primes.core.config import settings
from exceptional_primes.services.analysis_service import AnalysisService
from exceptional_primes.services.compare_service import CompareService
from exceptional_primes.services.frobenius_engine import FrobeniusEngine
from exceptional_primes.services.trace_cache import TraceCache


@lru_cache
def get_trace_cache() -> Optional[TraceCache]:
    if not settings.cache_enabled:
        return None
    return TraceCache(settings.cache_dir)


@lru_cache
def get_frobenius_engine() -> FrobeniusEngine:
    return FrobeniusEngine(get_trace_cache(), settings.point_count_limit)


@lru_cache
def get_analysis_service() -> AnalysisService:
    return AnalysisService(get_frobenius_engine())


@lru_cache
def get_compare_service() -> CompareService:
    return CompareService(get_frobenius_engine())


def reset_dependency_caches() -> None:
    """Utility for tests to clear cached singletons."""

    get_trace_cache.cache_clear()
    get_frobenius_engine.cache_clear()
    get_analysis_service.cache_clear()
    get_compare_service.cache_clear()
