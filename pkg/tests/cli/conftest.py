"""CLI fixtures: invoke ``main`` in-process and validate JSON documents."""

from __future__ import annotations

import json
import logging
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator

import exceptional_primes
from exceptional_primes.cli.main import main

SCHEMA_DIR = Path(exceptional_primes.__file__).parent / "schema"


@pytest.fixture(autouse=True)
def restore_root_logging():
    """``main`` reconfigures the root logger; put the test harness back."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def run_cli(capsys):
    def invoke(*argv: str) -> tuple[int, str, str]:
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke


@pytest.fixture
def validate():
    def check(document: dict, schema_name: str) -> None:
        schema = json.loads((SCHEMA_DIR / schema_name).read_text(encoding="utf-8"))
        Draft202012Validator.check_schema(schema)
        errors = list(Draft202012Validator(schema).iter_errors(document))
        assert not errors, [f"{list(e.path)}: {e.message}" for e in errors]

    return check


def last_json_line(stream: str) -> dict:
    return json.loads(stream.strip().splitlines()[-1])
