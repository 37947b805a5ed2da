import json
from pathlib import Path

import pytest


def test_verify_zoo_function(run_cli):
    """Verifying Maj_3 against two inequalities passes with one row per evaluator."""
    result = run_cli("verify", "--zoo", "majority:n=3", "--evaluator", "poincare", "--evaluator", "kkl_boolean")
    assert result.returncode == 0, result.stderr
    lines = result.stdout.splitlines()
    assert lines[0].startswith("format_version,name,status")
    assert [line.split(",")[1] for line in lines[1:]] == ["poincare", "kkl_boolean"]
    assert all(line.split(",")[2] == "PASS" for line in lines[1:])


def test_repeated_runs_are_identical(run_cli):
    """Two runs with the same seed print the same bytes."""
    args = ("verify", "--random", "5", "--seed", "3", "--evaluator", "kkl_boolean", "--evaluator", "talagrand_weighted:h=sqrt")
    first, second = run_cli(*args), run_cli(*args)
    assert first.returncode == 0, first.stderr
    assert first.stdout == second.stdout


def test_structured_output(run_cli):
    """--format structured prints a JSON document."""
    result = run_cli("verify", "--zoo", "dictator:n=1", "--evaluator", "log_ratio_probe", "--format", "structured")
    assert result.returncode == 0, result.stderr
    document = json.loads(result.stdout)
    assert document["format_version"] == 1
    assert document["reports"][0]["status"] == "EMPIRICAL"


def test_missing_suite_is_an_input_error(run_cli, tmp_path: Path):
    """A suite path that does not exist exits with status 2."""
    result = run_cli("verify", "--suite", str(tmp_path / "missing.json"))
    assert result.returncode == 2
    assert "not found" in result.stderr


def test_unknown_evaluator_is_an_input_error(run_cli):
    """Unknown evaluators are rejected before anything runs."""
    result = run_cli("verify", "--zoo", "majority:n=3", "--evaluator", "no_such_inequality")
    assert result.returncode == 2


def test_suite_file(run_cli, tmp_path: Path):
    """A suite file runs every evaluator on every function."""
    suite = {
        "format_version": 1,
        "seed": 1,
        "functions": [{"zoo": "parity:n=2"}, {"random": {"n": 3, "d": 2}}],
        "evaluators": ["poincare", "kkl_vector"],
        "format": "rows",
    }
    path = tmp_path / "suite.json"
    path.write_text(json.dumps(suite))
    result = run_cli("verify", "--suite", str(path))
    assert result.returncode == 0, result.stderr
    assert len(result.stdout.splitlines()) == 5


def test_scan(run_cli):
    """A two-variable scan reports the tight Poincare case."""
    result = run_cli("scan", "--n", "2", "--evaluator", "poincare")
    assert result.returncode == 0, result.stderr
    row = result.stdout.splitlines()[1].split(",")
    assert row[1] == "poincare"
    assert row[6] == "1"


def test_scan_size_limit(run_cli):
    """Scans beyond four variables are refused with status 2."""
    result = run_cli("scan", "--n", "5", "--evaluator", "kkl_boolean")
    assert result.returncode == 2


def test_zoo_list(run_cli):
    """The zoo listing names every family."""
    result = run_cli("zoo", "--list")
    assert result.returncode == 0, result.stderr
    listing = json.loads(result.stdout)
    assert "tribes" in listing["functions"]
    assert "tribes:w=2,s=2" in listing["catalogue"]


@pytest.mark.parametrize("saved_function_path", ["tribes:w=2,s=2"], indirect=True)
def test_saved_function_verifies(run_cli, saved_function_path: Path):
    """A function exported by the zoo command is read back by verify."""
    result = run_cli("verify", "--file", str(saved_function_path), "--evaluator", "kkl_boolean")
    assert result.returncode == 0, result.stderr
    assert "kkl_boolean,PASS" in result.stdout


def test_sharpness_counterexample(run_cli):
    """The counterexample sweep reports one empirical row per level."""
    result = run_cli("sharpness", "counterexample", "--levels", "1", "2")
    assert result.returncode == 0, result.stderr
    rows = result.stdout.splitlines()[1:]
    assert len(rows) == 2
    assert all(row.split(",")[2] == "EMPIRICAL" for row in rows)


def test_reconstruct(run_cli):
    """The heat chain rebuilds f - Ef."""
    result = run_cli("reconstruct", "--zoo", "majority:n=3")
    assert result.returncode == 0, result.stderr
    assert json.loads(result.stdout)["max_abs_error"] < 1e-6


def test_help_documents_exit_status(run_cli):
    """--help explains that an incomplete suite exits 2 even when its reports pass."""
    for args in (("--help",), ("verify", "--help")):
        result = run_cli(*args)
        assert result.returncode == 0
        assert "exit status:" in result.stdout
        assert "PARTIAL_SUCCESS" in result.stdout


def test_partial_suite_exits_two_with_passing_reports(run_cli, tmp_path: Path):
    """A suite where one pair errors and the other passes exits with status 2."""
    suite = {
        "format_version": 1,
        "seed": 1,
        "functions": [{"zoo": "majority:n=3"}, {"random": {"n": 3, "d": 2}}],
        "evaluators": ["kkl_boolean"],
        "format": "rows",
    }
    path = tmp_path / "suite.json"
    path.write_text(json.dumps(suite))
    result = run_cli("verify", "--suite", str(path))
    assert result.returncode == 2
    rows = result.stdout.splitlines()[1:]
    assert [row.split(",")[2] for row in rows] == ["PASS"]
    assert "PARTIAL_SUCCESS" in result.stderr
