"""Root logger setup for the command-line tool."""

import logging
import sys
from typing import Optional

from exceptional_primes.core.config import settings


def setup_logging(
    log_level: Optional[str] = None, log_file: Optional[str] = None
) -> logging.Logger:
    """Send log records to stderr, and to log_file when one is given.

    Falls back to EXC_LOG_LEVEL and EXC_LOG_FILE for missing arguments.
    """
    if log_level is None:
        log_level = settings.log_level
    if log_file is None:
        log_file = settings.log_file

    # Logger name padded to 25 characters
    formatter = logging.Formatter(
        fmt="%(asctime)s - %(name)-25s - %(levelname)-8s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    # Configure root logger
    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, log_level.upper()))

    # Clear existing handlers
    root_logger.handlers.clear()

    # stdout carries JSON/CSV reports, so console logs go to stderr
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    return logging.getLogger(__name__)


def get_logger(name: str) -> logging.Logger:
    """Module logger; records propagate to the root handlers."""
    return logging.getLogger(name)
