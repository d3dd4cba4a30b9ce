"""Settings for the exceptional-primes command-line tool."""

from typing import Optional

from pydantic import model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Tool settings, read from EXC_* variables and .env."""

    # Internal errors carry the exception text outside production
    environment: str = "development"  # "development" or "production"
    is_development: bool = True

    # Tool identity
    app_name: str = "Exceptional Primes"
    app_description: str = (
        "Frobenius traces, mod-ell image classification and explicit "
        "exceptional-prime bound ladders for elliptic curves over Q"
    )

    # Logging Settings
    log_level: str = "info"
    log_file: Optional[str] = None

    # Trace Cache Settings (EXC_CACHE_DIR)
    cache_dir: str = ".exc-cache"
    cache_enabled: bool = True

    # Frobenius Engine Settings
    trace_bound: int = 10000
    point_count_limit: int = 2**20
    jobs: int = 1

    # Image Classifier Settings
    scan_bound_floor: int = 100
    normalizer_zero_fraction_low: float = 0.35
    normalizer_zero_fraction_high: float = 0.65
    character_min_inert_samples: int = 8

    # GL2 Lab Settings
    closure_size_cap: int = 30000

    # Bound Calculus Settings
    bound_precision_digits: int = 40
    report_digits: int = 30

    # Chebotarev Lab Settings
    cheb_sieve_bound: int = 100000
    cheb_quadratic_range: int = 10000

    model_config = SettingsConfigDict(
        env_file=".env", env_prefix="EXC_", case_sensitive=False, extra="ignore"
    )

    @model_validator(mode="after")
    def _normalize(self):
        env = (self.environment or "").strip().lower()
        self.is_development = env in {"development", "dev", "local"}

        self.log_level = (self.log_level or "info").strip().lower()
        self.jobs = max(1, self.jobs)

        if self.normalizer_zero_fraction_low > self.normalizer_zero_fraction_high:
            self.normalizer_zero_fraction_low, self.normalizer_zero_fraction_high = (
                self.normalizer_zero_fraction_high,
                self.normalizer_zero_fraction_low,
            )

        # Reports print report_digits significant digits, so the working
        # precision must stay above it.
        if self.bound_precision_digits < self.report_digits + 5:
            self.bound_precision_digits = self.report_digits + 5

        return self


# Global settings instance
settings = Settings()
