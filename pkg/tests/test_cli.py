import json
import subprocess
import sys

import pytest

from hyperquot.cli import main
from hyperquot.fock import FockElement, ModelParams


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_betti_examples(capsys):
    code, out, _ = run(capsys, "betti", "--bound", "3", "--dvec", "2")
    assert code == 0 and out.strip() == "d=(2)  zdeg 0,2,4  betti 1,1,1"
    code, out, _ = run(capsys, "betti", "--n", "2", "--dvec", "0,0", "--format", "csv")
    assert out.splitlines() == ["d_1,d_2,zdeg,betti", "0,0,0,1"]
    code, out, _ = run(capsys, "betti", "--g", "1", "--dvec", "1")
    assert "betti 1,2,1" in out


def test_betti_check_full_table(capsys):
    code, out, _ = run(capsys, "betti", "--n", "2", "--r", "2", "--g", "1", "--bound", "2",
                       "--check", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["rows"] and all(r["agree"] for r in data["rows"])


def test_basis_examples(capsys):
    _, out, _ = run(capsys, "basis", "--dvec", "1")
    assert out.splitlines() == ["a_1^(0)(1) |0>", "a_1^(0)(w) |0>"]
    _, out, _ = run(capsys, "basis", "--n", "3", "--dvec", "0,0,0")
    assert out == "|0>\n"
    _, out, _ = run(capsys, "basis", "--n", "2", "--dvec", "1,2")
    assert len(out.splitlines()) == 4


def test_basis_json(capsys):
    _, out, _ = run(capsys, "basis", "--n", "2", "--dvec", "1,2", "--format", "json")
    assert [b["cohdeg"] for b in json.loads(out)["basis"]] == [0, 2, 2, 4]


@pytest.mark.parametrize("argv", [
    ["basis", "--dvec", "9"],
    ["basis", "--dvec", "1,2"],
    ["betti", "--dvec", "x"],
    ["verify", "--relation", "R99"],
    ["betti", "--r", "0"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def _write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


def test_act_examples(capsys, tmp_path):
    p = ModelParams(1, 1, 0)
    vac = _write(tmp_path / "vac.json", FockElement.vacuum(p).to_json())
    one = _write(tmp_path / "one.json", {"params": p.to_json(), "terms": [{"gens": [[1, 0, 0]], "coeff": "1"}]})
    ident = _write(tmp_path / "id.json", {"op": "Compose", "factors": []})
    b = _write(tmp_path / "b.json", {"op": "B", "k": 1, "j": 0, "c": 1})

    code, out, _ = run(capsys, "act", ident, vac, "--format", "json")
    assert code == 0 and FockElement.from_json(out) == FockElement.vacuum(p)
    code, out, _ = run(capsys, "act", b, one, "--format", "json")
    assert FockElement.from_json(out) == FockElement.vacuum(p)
    # output re-parses as input
    again = _write(tmp_path / "again.json", json.loads(out))
    code, out2, _ = run(capsys, "act", ident, again, "--format", "json")
    assert code == 0 and out2 == out


def test_act_domain_error(capsys, tmp_path):
    p = ModelParams(2, 1, 0)
    x = _write(tmp_path / "x.json", {"params": p.to_json(), "terms": [{"gens": [[2, 0, 0]], "coeff": "1"}]})
    b = _write(tmp_path / "b.json", {"op": "B", "k": 1, "j": 0, "c": 0})
    code, _, err = run(capsys, "act", b, x)
    assert code == 2 and '"op": "B"' in err


def test_act_bad_file(capsys, tmp_path):
    code, _, _ = run(capsys, "act", str(tmp_path / "missing.json"), str(tmp_path / "missing.json"))
    assert code == 2


def test_verify_r1_and_r12(capsys):
    code, out, _ = run(capsys, "verify", "--n", "2", "--r", "2", "--relation", "R1")
    assert code == 0 and out.startswith("R1: verified")
    code, out, _ = run(capsys, "verify", "--relation", "R12")
    assert code == 0 and "skipped" in out and "not computable in model" in out


def test_verify_all_json(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "--n", "2", "--r", "2", "--g", "2", "--bound", "1",
                       "--format", "json", "--out", str(target))
    assert code == 0 and out == ""
    data = json.loads(target.read_text())
    statuses = {r["relation"]: r["status"] for r in data["reports"]}
    assert statuses["R1"] == statuses["R11"] == statuses["BA"] == "verified"
    assert data["coverage"]["complete"]


def test_verify_confluence_seeded(capsys):
    a = run(capsys, "verify", "--relation", "confluence", "--samples", "40", "--seed", "3", "--format", "json")
    b = run(capsys, "verify", "--relation", "confluence", "--samples", "40", "--seed", "3", "--format", "json")
    assert a == b and a[0] == 0


def test_betti_output_deterministic(capsys):
    argv = ["betti", "--n", "2", "--r", "2", "--g", "1", "--bound", "2", "--format", "json"]
    assert run(capsys, *argv) == run(capsys, *argv)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hyperquot.cli", "basis", "--dvec", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and len(proc.stdout.splitlines()) == 2
