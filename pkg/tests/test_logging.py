"""Tests for the root logger setup."""

import logging

from exceptional_primes.core.logging import get_logger, setup_logging


def test_records_go_to_stderr_and_the_log_file(tmp_path, capsys):
    log_file = tmp_path / "run.log"
    root = logging.getLogger()
    saved_handlers, saved_level = root.handlers[:], root.level
    try:
        setup_logging("debug", str(log_file))
        get_logger("exceptional_primes.services").info("table built")
        for handler in root.handlers:
            handler.flush()
        captured = capsys.readouterr()
    finally:
        for handler in root.handlers:
            handler.close()
        root.handlers[:] = saved_handlers
        root.setLevel(saved_level)

    assert captured.out == ""
    assert "table built" in captured.err
    assert "exceptional_primes.services" in log_file.read_text(encoding="utf-8")
