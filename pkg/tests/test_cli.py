import json
import shutil
import subprocess

import pytest

from qgauss.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_relations_gl2_text(capsys):
    code, out, _ = run(capsys, "relations", "gl2")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 6
    assert lines[-1] == "a d - d a - (q - q^-1) b c = 0"


def test_relations_json_is_deterministic(capsys):
    _, first, _ = run(capsys, "relations", "gl1|1", "--format", "json")
    _, second, _ = run(capsys, "relations", "gl1|1", "--format", "json")
    assert first == second
    data = json.loads(first)
    assert "beta beta = 0" in [r["relation"] for r in data]
    assert all(list(r) == sorted(r) for r in data)


def test_decompose_json(capsys):
    code, out, _ = run(capsys, "decompose", "gl2", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["entries"]["u12"] == "[a]^-1 b"
    assert all(data["roundtrip"].values())


def test_decompose_text(capsys):
    code, out, _ = run(capsys, "decompose", "gl3")
    assert code == 0 and "A33 = " in out and "FAILED" not in out


@pytest.mark.parametrize("group", ["gl2", "gl3", "gl1|1", "gl2|1", "so3"])
def test_verify_passes(group, capsys):
    code, out, _ = run(capsys, "verify", group)
    assert code == 0
    assert "FAIL " not in out


def test_verify_sp2_json(capsys):
    code, out, _ = run(capsys, "verify", "sp2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["failed"] == []
    ids = {c["relation_id"] for c in data["checks"]}
    assert {"Dsp(T)=1", "Dsp[123]=Dsp[1]"} <= ids
    assert all(c["paper_ref"] for c in data["checks"])


def test_bcd_on_gl_is_usage_error(capsys):
    code, _, err = run(capsys, "verify", "gl2", "--suite", "bcd")
    assert code == 2 and "bcd" in err


@pytest.mark.parametrize("argv", [["relations", "nosuch"], ["frobnicate", "gl2"], ["verify", "gl2", "--suite", "x"]])
def test_usage_errors(argv, capsys):
    assert run(capsys, *argv)[0] == 2


def test_budget_exhaustion_exits_1(capsys, monkeypatch):
    monkeypatch.setenv("QGAUSS_BUDGET", "3")
    code, _, err = run(capsys, "verify", "gl3", "--suite", "central")
    assert code == 1 and err


def test_output_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "rmatrix", "gl2", "--format", "json", "-o", str(path))
    assert code == 0 and out == ""
    data = json.loads(path.read_text())
    assert {(r["row"], r["col"]) for r in data} == {("11", "11"), ("12", "12"), ("21", "12"), ("21", "21"), ("22", "22")}


def test_rmatrix_text(capsys):
    code, out, _ = run(capsys, "rmatrix", "gl2")
    assert code == 0 and out.splitlines()[2] == "21 12 q - q^-1"


def test_suite_selection(capsys):
    code, out, _ = run(capsys, "verify", "gl2", "--suite", "ybe")
    assert code == 0 and out.strip().splitlines()[-1] == "1/1 checks passed"


@pytest.mark.skipif(shutil.which("qgauss") is None, reason="console script not installed")
def test_console_script():
    r = subprocess.run(["qgauss", "relations", "gl2"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.splitlines()[-1].endswith("b c = 0")
