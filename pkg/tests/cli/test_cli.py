"""End-to-end tests of the command-line surface."""

import csv
import io
import json

import pytest

from exceptional_primes.cli.commands import analyze as analyze_command
from exceptional_primes.core.config import settings
from tests.cli.conftest import last_json_line

CURVE_11A = "0,-1,1,-10,-20"
CURVE_37A = "0,0,1,-1,0"


def _candidates(document: dict) -> list[int]:
    return [c["ell"] for c in document["verdicts"]["candidates"]]


def test_analyze_emits_schema_valid_json(run_cli, validate):
    code, out, _ = run_cli(
        "analyze", "--curve", CURVE_11A, "--trace-bound", "1000", "--scan-bound", "50"
    )

    assert code == 0
    document = json.loads(out)
    validate(document, "analysis.schema.json")
    assert _candidates(document) == [5]
    assert document["tool"]["schema_version"] == "1"
    assert document["bounds"]["probe_prime"] == 53


def test_analyze_is_deterministic_across_jobs(run_cli):
    args = (
        "analyze", "--curve", CURVE_37A, "--trace-bound", "600", "--scan-bound", "40"
    )

    _, first, _ = run_cli(*args)
    _, second, _ = run_cli(*args)
    _, threaded, _ = run_cli(*args, "--jobs", "3")

    assert first == second == threaded


def test_analyze_from_json_file_with_label(run_cli, tmp_path):
    path = tmp_path / "curve.json"
    path.write_text(
        json.dumps({"ainvs": [0, 0, 0, -1, 0], "label": "32a2"}), encoding="utf-8"
    )

    code, out, _ = run_cli(
        "analyze",
        "--curve",
        str(path),
        "--override",
        "2:additive:5",
        "--trace-bound",
        "300",
        "--scan-bound",
        "37",
        "--v-basis",
        "-4",
    )

    assert code == 0
    document = json.loads(out)
    assert document["curve"]["label"] == "32a2"
    assert document["reduction"]["N_E"] == 32
    assert document["reduction"]["a_E"] == 1
    assert document["v_exceptional"]["span"] == [1, -4]


def test_analyze_text_output_to_file(run_cli, tmp_path):
    target = tmp_path / "report.txt"

    code, out, _ = run_cli(
        "analyze",
        "--curve",
        CURVE_11A,
        "--trace-bound",
        "300",
        "--scan-bound",
        "37",
        "--format",
        "text",
        "--output",
        str(target),
    )

    assert code == 0
    assert out == ""
    assert target.read_text(encoding="utf-8").startswith(f"Curve [{CURVE_11A}]")


@pytest.mark.parametrize(
    "argv, module",
    [
        (("analyze", "--curve", "0,0,0,0,0"), "curve-model"),
        (("analyze", "--curve", "0,0,0,-1,0"), "curve-model"),
        (("analyze", "--curve", "0,0,1"), "curve-model"),
        (("analyze", "--curve", CURVE_11A, "--override", "2:split:2"), "curve-model"),
        (
            ("compare", "--curve-a", CURVE_11A, "--curve-b", CURVE_37A, "--bound", "1"),
            "cli-reporting",
        ),
        (("bounds", "--curve", CURVE_11A, "--conductor", "11"), "cli-reporting"),
        (("bounds", "--boot-A", "0.5"), "cli-reporting"),
        (("cheb-lab", "--cyclotomic", "2"), "cli-reporting"),
    ],
)
def test_input_errors_exit_two(run_cli, validate, argv, module):
    code, out, err = run_cli(*argv)

    assert code == 2
    assert out == ""
    document = last_json_line(err)
    validate(document, "error.schema.json")
    assert document["module"] == module


def test_bad_profile_file_is_an_input_error(run_cli, tmp_path):
    profile = tmp_path / "profile.json"
    profile.write_text('{"c_eff_single": -1}', encoding="utf-8")

    code, _, err = run_cli("bounds", "--profile", str(profile))

    assert code == 2
    assert "constants profile" in last_json_line(err)["error"]


def test_unexpected_failure_exits_three(run_cli, validate, monkeypatch):
    def broken():
        raise RuntimeError("boom")

    monkeypatch.setattr(analyze_command, "get_analysis_service", broken)

    code, _, err = run_cli("analyze", "--curve", CURVE_11A, "--trace-bound", "200")

    assert code == 3
    document = last_json_line(err)
    validate(document, "error.schema.json")
    assert document == {
        "error": "Internal error",
        "detail": "boom",
        "module": "cli-reporting",
    }


def test_production_hides_internal_error_detail(run_cli, validate, monkeypatch):
    def broken():
        raise RuntimeError("boom")

    monkeypatch.setattr(analyze_command, "get_analysis_service", broken)
    monkeypatch.setattr(settings, "is_development", False)

    code, _, err = run_cli("analyze", "--curve", CURVE_11A, "--trace-bound", "200")

    assert code == 3
    document = last_json_line(err)
    validate(document, "error.schema.json")
    assert document["detail"] is None


def test_compare_reference_curves(run_cli, validate):
    code, out, _ = run_cli("compare", "--curve-a", CURVE_11A, "--curve-b", CURVE_37A)

    assert code == 0
    document = json.loads(out)
    validate(document, "compare.schema.json")
    plain, adams = document["results"]
    assert (plain["prime"], plain["difference"]) == (3, 2)
    assert (adams["prime"], adams["difference"]) == (3, 2816)


def test_compare_single_mode(run_cli):
    code, out, _ = run_cli(
        "compare",
        "--curve-a",
        CURVE_37A,
        "--curve-b",
        CURVE_37A,
        "--mode",
        "plain",
        "--bound",
        "200",
    )

    assert code == 0
    (result,) = json.loads(out)["results"]
    assert result["mode"] == "plain"
    assert result["found"] is False


def test_bounds_from_curve(run_cli, validate):
    code, out, _ = run_cli(
        "bounds",
        "--curve",
        "0,0,0,-1,0",
        "--override",
        "2:additive:5",
        "--boot-set",
        "2,3",
    )

    assert code == 0
    document = json.loads(out)
    validate(document, "bounds.schema.json")
    assert (document["N_E"], document["a_E"]) == (32, 1)
    assert document["boot"]["S"] == [2, 3]
    lmv = next(e for e in document["entries"] if e["formula_id"] == "lmv")
    assert lmv["value"] == "8"


def test_bounds_defaults_to_rationals(run_cli, validate, tmp_path):
    invariants = tmp_path / "field.json"
    invariants.write_text(
        json.dumps({"n_K": 2, "h_K": 1, "abs_disc": 4, "ramified_primes": [2]}),
        encoding="utf-8",
    )

    code, out, _ = run_cli("bounds", "--conductor", "37")
    code_k, out_k, _ = run_cli(
        "bounds", "--conductor", "37", "--invariants", str(invariants)
    )

    assert code == code_k == 0
    validate(json.loads(out_k), "bounds.schema.json")
    assert json.loads(out)["invariants"]["n_K"] == 1
    assert json.loads(out_k)["invariants"]["n_K"] == 2


def test_gl2_selftest(run_cli, validate):
    code, out, _ = run_cli("gl2-selftest", "--ells", "5")

    assert code == 0
    document = json.loads(out)
    validate(document, "gl2-selftest.schema.json")
    assert document["passed"] is True
    assert document["ells"] == [5]


def test_cheb_lab_quadratic_csv_and_envelope(run_cli, validate, tmp_path):
    envelope = tmp_path / "envelope.json"

    code, out, _ = run_cli(
        "cheb-lab",
        "--quadratic-range",
        "30",
        "--sieve-bound",
        "2000",
        "--envelope-out",
        str(envelope),
    )

    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["D", "target", "least_prime", "ratio"]
    assert rows[1][:3] == ["-3", "inert", "2"]
    document = json.loads(envelope.read_text(encoding="utf-8"))
    validate(document, "envelope.schema.json")
    assert document["count"] == len(rows) - 1


def test_cheb_lab_cyclotomic(run_cli):
    code, out, _ = run_cli("cheb-lab", "--cyclotomic", "8", "--log-disc", "exact")

    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["m", "residue", "least_prime", "ratio"]
    assert [row[2] for row in rows[1:]] == ["17", "3", "5", "7"]


def test_version_flag(run_cli, capsys):
    with pytest.raises(SystemExit) as excinfo:
        run_cli("--version")
    assert excinfo.value.code == 0
    assert "exceptional-primes" in capsys.readouterr().out


@pytest.mark.slow
@pytest.mark.parametrize("curve, expected", [(CURVE_11A, [5]), (CURVE_37A, [])])
def test_reference_curves_at_full_bounds(run_cli, validate, curve, expected):
    code, out, _ = run_cli(
        "analyze", "--curve", curve, "--trace-bound", "10000", "--scan-bound", "200"
    )

    assert code == 0
    document = json.loads(out)
    validate(document, "analysis.schema.json")
    assert _candidates(document) == expected
    verdicts = {e["ell"]: e["verdict"] for e in document["image"]["entries"]}
    assert verdicts[2] == verdicts[3] == "undetermined"


@pytest.mark.slow
def test_full_bounds_ignore_job_count(run_cli):
    args = (
        "analyze", "--curve", CURVE_11A, "--trace-bound", "10000", "--scan-bound", "200"
    )

    _, serial, _ = run_cli(*args)
    _, parallel, _ = run_cli(*args, "--jobs", "4")

    assert serial == parallel
