"""
Tests for the command-line surface: exit codes, output files and determinism.
"""
import json

import pytest

from app import main, parse_lambda
from symbols import save_symbol
from symbols.core import make_symbol
from utils.error_handler import EXIT_CONFIG, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_PASS, SchemaError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_analyze_is_deterministic(tmp_path, capsys):
    first, second = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "analyze", "--example", "rolewicz", "--grid", "128", "--out", str(first))[0] == EXIT_PASS
    assert run(capsys, "analyze", "--example", "rolewicz", "--grid", "128", "--out", str(second))[0] == EXIT_PASS
    for name in ("report.json", "spectrum.csv"):
        assert (first / name).read_bytes() == (second / name).read_bytes()
    report = json.loads((first / "report.json").read_text())
    assert report["report"]["verdict"] == "certified_MVC"
    assert report["files"] == ["report.json", "spectrum.csv"]
    assert "out" not in report["run_config"]


def test_analyze_exit_codes(tmp_path, capsys):
    code, body = run(capsys, "analyze", "--example", "necessary_fail", "--grid", "128")
    assert code == EXIT_FAIL
    assert body["report"]["verdict"] == "necessary_failed"

    path = tmp_path / "contraction.json"
    save_symbol(make_symbol([0.0, 0.5], analytic_radius=2.0), str(path))
    code, body = run(capsys, "analyze", "--symbol", str(path), "--grid", "128")
    assert code == EXIT_INCONCLUSIVE
    assert body["example"]["id"] == "contraction.json"


def test_configuration_errors(tmp_path, capsys):
    assert main([]) == EXIT_CONFIG
    assert main(["analyze", "--example", "rolewicz", "--grid", "many"]) == EXIT_CONFIG
    assert main(["analyze", "--example", "nope"]) == EXIT_CONFIG
    assert main(["analyze"]) == EXIT_CONFIG
    assert main(["analyze", "--example", "rolewicz", "--symbol", str(tmp_path / "s.json")]) == EXIT_CONFIG
    assert main(["analyze", "--symbol", str(tmp_path / "missing.json")]) == EXIT_CONFIG
    assert main(["check", "--example", "rolewicz", "--condition", "dvcprime"]) == EXIT_CONFIG
    assert main(["example", "--example", "rolewicz", "--params", "{bad"]) == EXIT_CONFIG
    capsys.readouterr()


def test_example_params_from_file(tmp_path, capsys):
    params = tmp_path / "p.json"
    params.write_text(json.dumps({"N": 3}))
    out = tmp_path / "out"
    code, body = run(capsys, "example", "--example", "ex2", "--params", str(params), "--out", str(out))
    assert code == EXIT_PASS
    assert body["run_config"]["params"] == {"N": 3}
    assert body["example"]["params"]["N"] == 3
    saved = json.loads((out / "symbol.json").read_text())
    assert len(saved["poly"]) == 4
    assert saved["poly"][3][0] == pytest.approx(8.0, rel=1e-6)

    code, body = run(capsys, "example", "--example", "ex2", "--params", '{"N": 2}')
    assert code == EXIT_PASS
    assert body["example"]["params"]["N"] == 2


def test_params_file_errors(tmp_path, capsys):
    broken = tmp_path / "broken.json"
    broken.write_text("{bad")
    listed = tmp_path / "list.json"
    listed.write_text("[1, 2]")
    assert main(["example", "--example", "ex2", "--params", str(broken)]) == EXIT_CONFIG
    assert main(["example", "--example", "ex2", "--params", str(listed)]) == EXIT_CONFIG
    assert main(["example", "--example", "ex2", "--params", "3"]) == EXIT_CONFIG
    capsys.readouterr()


def test_parse_lambda():
    assert parse_lambda("1.5,-2") == complex(1.5, -2.0)
    assert parse_lambda("3") == 3.0
    with pytest.raises(SchemaError):
        parse_lambda("1,2,3")
    with pytest.raises(SchemaError):
        parse_lambda("one")


def test_example_writes_symbol(tmp_path, capsys):
    code, body = run(capsys, "example", "--example", "rolewicz", "--alpha", "3", "--out", str(tmp_path))
    assert code == EXIT_PASS
    saved = json.loads((tmp_path / "symbol.json").read_text())
    assert saved["poly"][1] == [3.0, 0.0]
    assert body["run_config"]["params"] == {"alpha": 3.0}


def test_check_iac_on_hints(capsys):
    code, body = run(capsys, "check", "--example", "ex3", "--n", "3", "--eps", "0.01", "--condition", "iac")
    assert code == EXIT_PASS
    assert body["iac"]["status"] == "pass"


def test_eigen_and_adjoint(tmp_path, capsys):
    code, body = run(capsys, "eigen", "--example", "rolewicz", "--lambda", "0,0", "--size", "64",
                     "--out", str(tmp_path))
    assert code == EXIT_PASS
    assert body["eigen"][0]["residual"] < 1e-12
    assert (tmp_path / "eigen.csv").exists()
    code, body = run(capsys, "eigen", "--example", "necessary_fail", "--mu", "0,0", "--size", "128")
    assert code == EXIT_PASS
    assert body["adjoint"]["residual"] < 1e-8


def test_orbit_and_spectrum(tmp_path, capsys):
    code, body = run(capsys, "orbit", "--example", "rolewicz", "--size", "64", "--steps", "20", "--seed", "3")
    assert code == EXIT_PASS
    assert body["orbit"]["steps"] == 20
    assert body["orbit"]["seed"] == 3
    code, body = run(capsys, "spectrum", "--example", "rolewicz", "--grid", "64", "--eigs", "16",
                     "--out", str(tmp_path))
    assert code == EXIT_PASS
    assert body["spectrum"]["meets_outside_disk"]
    assert (tmp_path / "section_eigenvalues.csv").exists()
