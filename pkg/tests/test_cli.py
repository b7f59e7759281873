import json
import subprocess
import sys

import pytest

from omega_forge.cli import main
from omega_forge.polycore import parse, to_text


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_omega_apply(capsys):
    assert run(capsys, "omega", "--n", "2", "--apply", "x11*x22 - x12*x21") == (0, "2\n", "")
    assert run(capsys, "omega", "--n", "2", "--apply", "1")[1] == "0\n"
    status, out, _ = run(capsys, "omega", "--n", "2", "--apply", "(x11*x22 - x12*x21)^2", "--power", "2")
    assert out == "12\n"


def test_omega_constants_json(capsys):
    status, out, _ = run(capsys, "omega", "--n", "2", "--constants", "3")
    data = json.loads(out)
    assert status == 0
    assert data["alphas"] == [[1, "2"], [2, "6"], [3, "12"]]
    assert data["cs"][1] == [2, "12"]


def test_omega_parse_error(capsys):
    status, _, err = run(capsys, "omega", "--n", "2", "--apply", "x11*(x22")
    assert status == 1 and "position 8" in err


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as info:
        main(["omega", "--bogus"])
    assert info.value.code == 1
    assert run(capsys, "omega", "--n", "2")[0] == 1


def test_invariants_quadratic(capsys):
    status, out, _ = run(capsys, "invariants", "--form-degree", "2", "--bound", "4")
    data = json.loads(out)
    assert status == 0 and data["agreement"]
    (gen,) = data["generators"]
    abc = ("a", "b", "c")
    assert parse(gen["polynomial"], abc) in (parse("b^2 - 4*a*c", abc), parse("4*a*c - b^2", abc))


def test_invariants_quartic(capsys):
    status, out, _ = run(capsys, "invariants", "--form-degree", "4", "--bound", "3")
    data = json.loads(out)
    dims = {d["degree"]: d["oracle_dim"] for d in data["degrees"]}
    assert status == 0 and dims == {1: 0, 2: 1, 3: 1}
    assert [g["degree"] for g in data["generators"]] == [2, 3]


def test_invariants_linear(capsys):
    status, out, _ = run(capsys, "invariants", "--form-degree", "1", "--bound", "3", "--format", "text")
    assert status == 0 and "new generator" not in out and "agreement: True" in out


def test_invariants_cap_refusal(capsys, monkeypatch):
    monkeypatch.setenv("OMEGA_FORGE_CAP", "10")
    status, out, err = run(capsys, "invariants", "--form-degree", "4", "--bound", "3")
    assert status == 1 and "refused" in err and out == ""


def test_weights(capsys):
    status, out, _ = run(capsys, "weights", "--n", "2", "--box", "3")
    data = json.loads(out)
    assert sorted(map(tuple, data["polynomial_dominant_weights"])) == sorted((i, j) for i in range(4) for j in range(i + 1))
    assert all(c["passed"] for c in data["checks"])
    status, out, _ = run(capsys, "weights", "--n", "2", "--box", "0")
    assert json.loads(out)["polynomial_dominant_weights"] == [[0, 0]]


def test_weights_family(capsys):
    status, out, _ = run(capsys, "weights", "--n", "2", "--box", "3", "--family", "det")
    data = json.loads(out)
    table = {tuple(w): s for w, s in data["family"]["entries"]}
    assert table[(1, 1)] == "free" and table[(1, 0)] == "forced-zero" and table[(2, 1)] == "free"
    assert data["family"]["proper"] and data["monoid_cone"]["strictly_convex"]


def test_verify_passes(capsys):
    status, out, _ = run(capsys, "verify", "--n", "2", "--seed", "7")
    assert status == 0 and "FAIL" not in out
    status, out, _ = run(capsys, "verify", "--n", "3", "--seed", "7", "--max-degree", "3")
    assert status == 0 and out.count(": pass") == 7


def test_verify_fault_injection(capsys):
    status, out, _ = run(capsys, "verify", "--n", "2", "--seed", "7", "--inject-fault", "first-rule")
    assert status == 2
    assert "first-rule: FAIL" in out and "residual" in out


def test_determinism_and_output_file(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["verify", "--n", "2", "--seed", "3", "--format", "json", "--output", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text(encoding="utf-8"))["passed"]
    for path in (a, b):
        main(["invariants", "--form-degree", "2", "--bound", "3", "--output", str(path)])
    assert a.read_bytes() == b.read_bytes()


def test_emitted_polynomials_round_trip(capsys):
    _, out, _ = run(capsys, "invariants", "--form-degree", "4", "--bound", "3")
    abc = ("a", "b", "c", "d", "e")
    for g in json.loads(out)["generators"]:
        text = g["polynomial"]
        assert to_text(parse(text, abc)) == text


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "omega_forge", "omega", "--n", "3", "--apply", "x11*x22*x33"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "1\n"
