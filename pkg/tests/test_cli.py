import json
import subprocess
import sys

import pytest

from conftest import corpus_text
from tiltkit import cli
from tiltkit.cli import EXIT_ASSERT, EXIT_OK, EXIT_TRUNCATED, EXIT_USAGE


@pytest.fixture
def empty_alg(tmp_path):
    p = tmp_path / "empty.alg"
    p.write_text("vertex v\n", encoding="utf-8")
    return p


def run_to_file(tmp_path, name, argv):
    out = tmp_path / name
    code, report = cli.run(argv + ["--out", str(out)])
    return code, report, out.read_bytes()


def test_basis_of_empty(empty_alg, tmp_path):
    code, report, _ = run_to_file(tmp_path, "r.json", ["basis", "--algebra", str(empty_alg)])
    assert code == EXIT_OK
    assert report["result"]["dimension"] == 1
    assert report["schema"] == 1 and report["input"]["name"] == "empty.alg"


def test_check_ex211(tmp_path):
    code, report, _ = run_to_file(tmp_path, "r.json", ["check", "--algebra", "ex211.alg"])
    assert code == EXIT_OK
    assert [s["overall"] for s in report["result"]["simples"]] == [True, True]


def test_reports_are_byte_identical(tmp_path):
    argv = ["enumerate-exceptional", "--algebra", "ex211", "--seed", "7"]
    _, _, a = run_to_file(tmp_path, "a.json", argv)
    _, _, b = run_to_file(tmp_path, "b.json", argv)
    assert a == b
    data = json.loads(a)
    assert list(data) == sorted(data)
    assert "timing_seconds" not in data
    assert data["command"]["seed"] == 7


def test_timing_is_opt_in(tmp_path):
    _, report, _ = run_to_file(tmp_path, "r.json", ["coxeter", "--algebra", "a2", "--timing"])
    assert "timing_seconds" in report


def test_stdout_when_no_path(capsys):
    code, _ = cli.run(["coxeter", "--algebra", "kronecker"])
    assert code == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["result"]["charpoly"] == [1, -2, 1]


@pytest.mark.parametrize("argv", [
    ["frobnicate", "--algebra", "a2"],
    ["basis"],
    ["basis", "--algebra", "a2", "--bogus"],
    ["basis", "--algebra", "does-not-exist.alg"],
    ["basis", "--algebra", "a2", "--field", "F:4"],
])
def test_usage_errors(argv, capsys):
    code, report = cli.run(argv)
    assert code == EXIT_USAGE and report is None
    assert capsys.readouterr().err


def test_malformed_file_reports_position(tmp_path, capsys):
    p = tmp_path / "bad.alg"
    p.write_text("vertex x\narrow a x nowhere\n", encoding="utf-8")
    assert cli.run(["basis", "--algebra", str(p)])[0] == EXIT_USAGE
    assert "line 2" in capsys.readouterr().err


def test_truncated_search_exit_code(tmp_path):
    code, report, _ = run_to_file(tmp_path, "r.json", ["enumerate-exceptional", "--algebra", "ex211", "--cap", "2"])
    assert code == EXIT_TRUNCATED and report["truncated"] is True


def test_conclusions_failure_exit_code(tmp_path):
    # the same five checks on an algebra whose simples pass the conditions but where
    # one of the structural statements fails would exit 2; on the corpus they pass
    code, report, _ = run_to_file(tmp_path, "r.json", ["conclusions", "--algebra", "local3"])
    assert code == EXIT_OK and report["result"]["all_pass"]
    assert EXIT_ASSERT == 2


def test_field_override(tmp_path):
    code, report, _ = run_to_file(tmp_path, "r.json", ["basis", "--algebra", "ex47", "--field", "Q"])
    assert code == EXIT_OK and report["field"] == "Q" and report["result"]["dimension"] == 13


def test_all_verbs_run_on_small_algebra(tmp_path):
    for verb in cli.VERBS:
        argv = [verb, "--algebra", "a2"]
        if verb == "probe-findim":
            argv += ["--dim-bound", "2", "--samples", "5"]
        code, report, _ = run_to_file(tmp_path, f"{verb}.json", argv)
        assert code == EXIT_OK, verb
        assert report["tool"] == "tiltkit"


def test_endo_with_complex_file(tmp_path):
    from conftest import load
    from tiltkit.complexes import two_term
    A = load("ex211")
    X = two_term(A, ["y"], ["x"], {(0, 0): "alpha"})
    p = tmp_path / "x.json"
    p.write_text(json.dumps(X.to_json()), encoding="utf-8")
    code, report, _ = run_to_file(tmp_path, "r.json", ["endo", "--algebra", "ex211", "--complex", str(p)])
    assert code == EXIT_OK
    assert report["result"]["algebras"][0]["endomorphism_algebra"]["dimension"] == 3


def test_module_entry_point(tmp_path):
    alg = tmp_path / "a2.alg"
    alg.write_text(corpus_text("a2"), encoding="utf-8")
    proc = subprocess.run([sys.executable, "-m", "tiltkit", "coxeter", "--algebra", str(alg)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["input"]["name"] == "a2.alg"
