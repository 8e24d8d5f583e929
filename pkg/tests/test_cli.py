import io
import json
import subprocess
import sys

import numpy as np
import pytest

from qlra import ProbabilityData, generate, load, random_instance, save
from qlra.cli import main


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def data_file(tmp_path):
    path = tmp_path / "data.json"
    path.write_text(save(generate(random_instance(5))))
    return str(path)


def test_forward_seed_is_loadable(capsys):
    code, out, _ = run(["forward", "--seed", "42"], capsys)
    assert code == 0
    assert load(out) == generate(random_instance(42))


def test_forward_is_byte_identical(capsys):
    _, a, _ = run(["forward", "--seed", "3", "--emit-instance"], capsys)
    _, b, _ = run(["forward", "--seed", "3", "--emit-instance"], capsys)
    assert a == b
    assert "instance" in json.loads(a)


def test_forward_mub_and_ansatz(capsys):
    code, out, _ = run(["forward", "--mub", "0.4,0.4"], capsys)
    assert code == 0
    np.testing.assert_allclose(load(out).p_b, 1 / 3)
    code, out, _ = run(["forward", "--ansatz", "1.0,1.0,-0.7071067811865476"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert set(doc["lambda"]) == {"12", "13", "23"}


def test_forward_rejects_bad_numbers(capsys):
    code, _, err = run(["forward", "--mub", "0.4"], capsys)
    assert code == 2 and "--mub" in err


def test_validate(capsys, data_file):
    code, out, _ = run(["validate", data_file, "--double-stochastic"], capsys)
    assert code == 0
    assert json.loads(out)["validate"]["passed"] is True


def test_validate_failure_exit_code(capsys, tmp_path):
    bad = ProbabilityData.uniform().replace(p_b=[0.5, 0.5, 0.5])
    path = tmp_path / "bad.json"
    path.write_text(save(bad))
    code, out, _ = run(["validate", str(path)], capsys)
    assert code == 1
    assert json.loads(out)["validate"]["violations"][0]["constraint"] == "p_b.sum"


def test_schema_error_exit_code(capsys, tmp_path):
    path = tmp_path / "x.json"
    path.write_text('{"p_b": [0.5, 0.5, 0]}')
    code, _, err = run(["lambdas", str(path)], capsys)
    assert code == 2 and "p_a" in err


def test_parse_error_exit_code(capsys, tmp_path):
    path = tmp_path / "x.json"
    path.write_text('{"p_b": [0.5,')
    assert run(["sorkin", str(path)], capsys)[0] == 2


def test_missing_file(capsys):
    assert run(["sorkin", "/nonexistent/file.json"], capsys)[0] == 2


def test_lambdas_and_sorkin(capsys, data_file):
    code, out, _ = run(["lambdas", data_file], capsys)
    assert code == 0
    doc = json.loads(out)
    assert set(doc["lambda"]) == {"12", "13", "23"}
    assert doc["bounded"]["passed"] is True
    code, out, _ = run(["sorkin", data_file], capsys)
    assert code == 0


def test_solve_all_branches(capsys, data_file):
    code, out, _ = run(["solve", data_file, "--all-branches"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert len(doc["solutions"]) == 8


def test_qlra_from_stdin(capsys, monkeypatch):
    text = save(generate(random_instance(42)))
    code, out, _ = run(["qlra", "-"], capsys, stdin=text, monkeypatch=monkeypatch)
    assert code == 0
    doc = json.loads(out)
    assert doc["report"]["feasible"] is True
    assert {"re", "im"} <= set(doc["models"][0]["psi"])


def test_qlra_infeasible_exit(capsys, tmp_path):
    path = tmp_path / "u.json"
    path.write_text(save(ProbabilityData.uniform()))
    code, out, _ = run(["qlra", str(path)], capsys)
    assert code == 1
    assert json.loads(out)["report"]["feasible"] is False


def test_qlra_text_format(capsys, data_file):
    code, out, _ = run(["qlra", data_file, "--format", "text"], capsys)
    assert code == 0
    assert "feasible: True" in out


def test_simulate_then_qlra(capsys, tmp_path):
    path = tmp_path / "f.json"
    code, _, _ = run(["simulate", "--seed", "3", "--samples", "1000000", "--mub", "0.4,0.4", "-o", str(path)], capsys)
    assert code == 0
    assert "counts" in json.loads(path.read_text())
    assert run(["qlra", str(path), "--tol", "0.005", "--lambda-tol", "auto"], capsys)[0] == 0


def test_simulate_from_instance(capsys, tmp_path):
    inst = tmp_path / "i.json"
    _, out, _ = run(["forward", "--seed", "8", "--emit-instance"], capsys)
    inst.write_text(out)
    code, out, _ = run(["simulate", "--seed", "1", "--samples", "50", "--instance", str(inst)], capsys)
    assert code == 0
    assert sum(json.loads(out)["counts"]["A"]) == 50


def test_example1(capsys):
    code, out, _ = run(["example1"], capsys)
    assert code == 0
    doc = json.loads(out)
    r2 = 1 / np.sqrt(2)
    assert len(doc["plus"]["models"]) == 8
    for m in doc["plus"]["models"] + doc["minus"]["models"]:
        np.testing.assert_allclose(m["abs_psi_squared"], 1 / 3, atol=1e-12)
    upper = np.array([(1 + r2) + 1j * (1 - r2), 1 + 1j * np.sqrt(2), (1 - r2) + 1j * (1 + r2)])
    found = [np.array(m["psi_times_3"]["re"]) + 1j * np.array(m["psi_times_3"]["im"]) for m in doc["plus"]["models"]]
    assert any(np.allclose(f, upper, atol=1e-12) for f in found)
    assert doc["plus"]["two_observable"]["feasible"] is False


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        main(["qlra"])
    assert info.value.code == 2


def test_console_pipe(tmp_path):
    fwd = subprocess.run([sys.executable, "-m", "qlra.cli", "forward", "--seed", "42"], capture_output=True, text=True, check=True)
    res = subprocess.run([sys.executable, "-m", "qlra.cli", "qlra", "-"], input=fwd.stdout, capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["report"]["feasible"] is True
