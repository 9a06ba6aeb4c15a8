import json
import math

import numpy as np
import pytest

from qig.cli import main, run
from qig.fileio import write_matrix
from qig.matcore import random_density, random_hermitian

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


@pytest.fixture
def files(tmp_path):
    (tmp_path / "p.json").write_text(json.dumps({"p": [0.5, 0.5]}))
    (tmp_path / "q.json").write_text(json.dumps({"p": [0.25, 0.75]}))
    (tmp_path / "r.json").write_text(json.dumps({"p": [0.2, 0.3, 0.5]}))
    write_matrix(tmp_path / "fix.json", np.diag([0.75, 0.25]))
    write_matrix(tmp_path / "rho2.json", random_density(2, 3))
    write_matrix(tmp_path / "X.json", PAULI_X)
    (tmp_path / "rect.json").write_text(json.dumps({"dim": 2, "re": [[1, 0, 0], [0, 1, 0]]}))
    return tmp_path


def test_divergence(files):
    code, rep, _ = run(["divergence", "--f", "kl", "--p", str(files / "p.json"),
                        "--q", str(files / "q.json")])
    assert code == 0
    assert rep["value"] == pytest.approx(0.5 * math.log(4 / 3), abs=1e-15)
    assert rep["seed"] == 0 and "wall_time" in rep
    code, rep, _ = run(["divergence", "--f", "kl", "--bits", "--p", str(files / "p.json"),
                        "--q", str(files / "q.json")])
    assert rep["value"] == pytest.approx(0.5 * math.log2(4 / 3)) and rep["unit"] == "bits"
    code, rep, _ = run(["divergence", "--f", "kl", "--p", str(files / "p.json"),
                        "--q", str(files / "r.json")])
    assert code == 2 and "error" in rep


def test_metric_commands(files):
    base = ["--rho", str(files / "fix.json"), "--A", str(files / "X.json")]
    code, rep, _ = run(["fisher", "--f", "sld"] + base)
    assert code == 0 and rep["value"]["re"] == pytest.approx(4.0, abs=1e-10)
    assert rep["basis"]["eigenvalues"] == pytest.approx([0.25, 0.75])
    code, rep, _ = run(["fisher", "--f", "km"] + base)
    assert rep["value"]["re"] == pytest.approx(4 * math.log(3), abs=1e-10)
    code, rep, _ = run(["skew", "--f", "wyd:0.5"] + base)
    assert rep["value"]["re"] == pytest.approx(0.133975, abs=1e-6)
    # flat kernel: Tr A*A
    code, rep, _ = run(["cost", "--f", "hs"] + base)
    assert rep["value"]["re"] == pytest.approx(2.0)
    code, rep, _ = run(["covariance", "--f", "sld"] + base)
    assert rep["value"]["re"] == pytest.approx(1.0)
    code, rep, _ = run(["skew", "--f", "xlogx"] + base)
    assert code == 2


def test_quasi(files):
    code, rep, _ = run(["quasi", "--f", "xlogx", "--rho1", str(files / "fix.json"),
                        "--rho2", str(files / "rho2.json")])
    assert code == 0 and rep["value"] >= 0


def test_input_errors(files, capsys):
    assert run(["fisher", "--f", "sld", "--rho", str(files / "rect.json"),
                "--A", str(files / "X.json")])[0] == 2
    assert run(["fisher", "--f", "nope", "--rho", str(files / "fix.json"),
                "--A", str(files / "X.json")])[0] == 2
    assert main(["unknown-command"]) == 2
    assert main(["verify", "oracle", "--trials", "0"]) == 2
    capsys.readouterr()


def test_cramer_rao_builtin_models():
    for model, f in (("affine", "hs"), ("sld-exp", "sld"), ("km-exp", "km")):
        args = ["cramer-rao", "--model", model, "--f", f, "--dim", "3", "--seed", "4"]
        if model == "affine":
            args.append("--uncentered")
        code, rep, _ = run(args)
        assert code == 0, rep
        assert np.abs(rep["residual"]).max() < 1e-6
    assert run(["cramer-rao", "--model", "weird", "--f", "sld"])[0] == 2
    assert run(["cramer-rao", "--model", "affine", "--f", "sld", "--theta", "0,0"])[0] == 2


def test_cramer_rao_model_file(tmp_path):
    rho = random_density(2, 5)
    B = np.diag([0.01, -0.01])
    write_matrix(tmp_path / "rho.json", rho)
    write_matrix(tmp_path / "B.json", B)
    write_matrix(tmp_path / "A.json", random_hermitian(2, np.random.default_rng(5)))
    (tmp_path / "m.json").write_text(json.dumps({"kind": "affine", "rho": "rho.json",
                                                 "generators": ["B.json"],
                                                 "estimators": ["A.json"]}))
    code, rep, _ = run(["cramer-rao", "--model", f"file:{tmp_path / 'm.json'}", "--f", "sld"])
    assert code == 0 and rep["min_eigenvalue"] >= -1e-8


def test_evolve(files):
    code, rep, _ = run(["evolve", "--f", "sld", "--dim", "3", "--seed", "1"])
    assert code == 0
    D = np.array(rep["D"]["re"]) + 1j * np.array(rep["D"]["im"])
    assert rep["trace"] == pytest.approx(np.trace(D).real)
    assert run(["evolve", "--f", "sld", "--steps", "10"])[0] == 2
    assert run(["evolve", "--f", "sld", "--rho", str(files / "fix.json"),
                "--T", str(files / "rect.json")])[0] == 2


def test_verify_and_out(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["verify", "monotonicity", "--f", "xlogx", "--trials", "10", "--dim", "2",
                 "--seed", "7", "--out", str(out)])
    assert code == 0
    printed = json.loads(capsys.readouterr().out)
    assert json.loads(out.read_text()) == printed
    suite = printed["suites"][0]
    assert suite["passed"] and suite["trials"] == 10 and suite["seed"] == 7


def test_verify_violation_exit_code():
    # an absurd tolerance turns the oracle check into a failure
    code, rep, _ = run(["verify", "oracle", "--trials", "3", "--tol", "1e-300"])
    assert code == 1 and not rep["passed"]


def test_verify_rejects_bad_selector():
    assert run(["verify", "oracle", "--f", "nope"])[0] == 2
