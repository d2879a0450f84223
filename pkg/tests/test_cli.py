import json
import subprocess
import sys

import pytest

from bochner_lab.cli import main, parse_config, run


def cli(*args):
    return run(parse_config(list(args)))


APPELL_SPEC = {"coeffs": {"1": "x", "2": "0", "3": "1"}, "family": "appell(a3=1,k=3)",
               "schema": 1, "vars": []}


@pytest.fixture
def appell_file(tmp_path):
    code, out = cli("catalog", "--family", "appell", "--args", "k=3,a3=1")
    assert code == 0
    path = tmp_path / "appell.json"
    path.write_text(out)
    return str(path)


def test_catalog_golden():
    code, out = cli("catalog", "--family", "appell", "--args", "k=3,a3=1")
    assert code == 0 and json.loads(out) == APPELL_SPEC


def test_recur_csv_example(appell_file):
    code, out = cli("recur", "--op", appell_file, "-n", "12", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,b0,b1,b2"
    assert [row.split(",")[3] for row in lines[3:]] == [f"{-k * (k - 1)}/1" for k in range(2, 12)]


def test_recur_json_reconstruct(appell_file):
    code, out = cli("recur", "--op", appell_file, "-n", "20", "--reconstruct")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == 1 and doc["bandwidth"] == 2
    assert doc["reconstructed"] == {"0": "0", "1": "0", "2": "-n^2 + n"}
    assert doc["rows"][3] == ["0/1", "0/1", "-6/1", "0/1"]


def test_usage_errors(appell_file):
    assert cli("recur", "--op", appell_file, "-n", "1")[0] == 2
    assert cli("recur", "--op", "/nonexistent.json")[0] == 2
    assert cli("catalog", "--family", "nope")[0] == 2
    assert cli("eigenpolys", "--family", "type1", "--args", "k=2,a2=1", "--op", appell_file)[0] == 2
    assert main(["recur", "--bogus"]) == 2
    assert main(["verify-paper", "--case", "9"]) == 2


def test_unbound_parameters(tmp_path):
    path = tmp_path / "sym.json"
    path.write_text(json.dumps({"vars": ["a"], "coeffs": {"1": "x", "2": "a"}}))
    assert cli("eigenpolys", "--op", str(path), "-n", "3")[0] == 2
    code, out = cli("eigenpolys", "--op", str(path), "-n", "3", "--bind", "a=2")
    assert code == 0 and json.loads(out)["polys"][2] == "x^2 + 2"


def test_symbolic_commands(tmp_path):
    path = tmp_path / "sym.json"
    path.write_text(json.dumps({"vars": ["a1", "a2", "a3"],
                                "coeffs": {"1": "x + a1", "2": "a2", "3": "a3"}}))
    code, out = cli("symbolic-b", "--op", str(path), "--jmax", "3")
    doc = json.loads(out)
    assert code == 0 and doc["b"]["3"] == "0" and doc["b"]["2"] == "-n^2*a3 + n*a3"
    code, out = cli("constraints", "--op", str(path), "--j", "1")
    assert json.loads(out)["constraints"] == [[1, "-a2"]]


def test_math_failures_exit_1(tmp_path):
    path = tmp_path / "pure.json"
    path.write_text(json.dumps({"vars": [], "coeffs": {"1": "3*x", "2": "x^2", "3": "1"}}))
    code, out = cli("recur", "--op", str(path), "-n", "16", "--reconstruct")
    assert code == 1 and json.loads(out)["error"] == "Unbounded"
    code, out = cli("darboux", "--family", "hermite", "-n", "10")
    doc = json.loads(out)
    assert code == 1 and doc["error"] == "Breakdown" and doc["n"] == 1


def test_darboux_command():
    short = cli("darboux", "--family", "laguerre", "--args", "alpha=1", "-n", "12",
                "--complete-order", "4")
    assert short[0] == 2  # 14 unknowns need more polynomials
    code, out = cli("darboux", "--family", "laguerre", "--args", "alpha=1", "-n", "30",
                    "--complete-order", "4")
    doc = json.loads(out)
    assert code == 0
    assert doc["h_closed"] == "n + 1" and doc["conjugation_failures"] == []
    assert doc["Lambda_hat"] == "T + (2*n + 1)*I + (n^2 - 1)*T^(-1)"
    assert len(doc["completion"]) == 1


def test_adcheck():
    code, out = cli("adcheck", "--family", "appell", "--args", "k=3,a1=1,a2=2,a3=3")
    assert code == 0 and json.loads(out)["peeled"] == ["18", "0", "0", "0"]


def test_deterministic_output():
    args = ("recur", "--family", "jacobi", "--args", "alpha=1,beta=2", "-n", "12", "--reconstruct")
    assert cli(*args) == cli(*args)


def test_verify_paper_exit_codes(monkeypatch):
    monkeypatch.setenv("BOCHNER_LAB_THREADS", "2")
    code, out = cli("verify-paper", "--case", "3.2", "--format", "json")
    assert code == 0 and json.loads(out)["passed"] is True
    code, _ = cli("verify-paper", "--case", "appendix")
    assert code == 1  # the printed b5 closed form does not reproduce


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bochner_lab.cli", "catalog", "--family", "hermite"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["coeffs"] == {"1": "x", "2": "-1"}
