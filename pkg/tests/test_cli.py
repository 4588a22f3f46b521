import json
import subprocess
import sys

import pytest

from localnonneg.cli import main

from conftest import CERTIFIABLE, DEGENERATE


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("cmd", ["check", "certify"])
def test_certifiable(capsys, cmd):
    code, out, _ = run(capsys, cmd, CERTIFIABLE, "--json")
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "certified"
    assert data["principal_part"] == "z^6 + y^4 + x^2"


def test_check_degenerate(capsys):
    code, out, _ = run(capsys, "check", DEGENERATE, "--json")
    assert code == 1
    data = json.loads(out)
    assert data["verdict"] == "refuted"
    assert data["witness"]["curve"]["weights"] == [1, 1]
    assert data["witness"]["lowest_degree"] == 10
    assert data["corollaries"] == {"homogeneous_pd": False, "isolated_singularity": False}


def test_certify_unknown(capsys):
    code, out, _ = run(capsys, "certify", "x^2-2*x*y+y^2")
    assert code == 2
    assert "verdict: unknown" in out and "hypothesis-fails" in out


def test_text_and_json_agree(capsys):
    for poly in [CERTIFIABLE, DEGENERATE, "x^2-x*y+y^2", "x^2-2*x*y+y^2"]:
        code_t, out_t, _ = run(capsys, "check", poly)
        code_j, out_j, _ = run(capsys, "check", poly, "--json")
        assert code_t == code_j
        assert f"verdict: {json.loads(out_j)['verdict']}" in out_t


def test_json_byte_identical(capsys):
    outs = [run(capsys, "check", DEGENERATE, "--json")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    outs = [run(capsys, "analyze", CERTIFIABLE, "--json")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_analyze_schema(capsys):
    code, out, _ = run(capsys, "analyze", DEGENERATE, "--json")
    assert code == 0
    data = json.loads(out)
    assert set(data) >= {"polynomial", "variables", "support", "newton_polytope", "diagram_faces",
                         "principal_part", "tail", "vertex_characteristic", "hessian"}
    assert data["variables"] == ["x", "y"]
    assert data["principal_part"] == "y^18 + x^16 + x^4*y^2 - 2*x^3*y^3 + x^2*y^4"
    assert len(data["support"]) == 7


def test_file_input_and_vars(capsys, tmp_path):
    p = tmp_path / "f.txt"
    p.write_text(CERTIFIABLE + "\n")
    code, out, _ = run(capsys, "check", f"@{p}", "--json")
    assert code == 0
    code, out, _ = run(capsys, "analyze", "y^2+x^2", "--vars", "y,x", "--json")
    assert json.loads(out)["variables"] == ["y", "x"]
    code, _, err = run(capsys, "check", "@" + str(tmp_path / "missing"))
    assert code == 65


def test_refute_curve(capsys):
    code, out, _ = run(capsys, "refute", DEGENERATE, "--curve", "t,t", "--json")
    assert code == 1
    data = json.loads(out)
    assert data["curve_status"] == "fail" and data["witness"]["lowest_coefficient"] == "-1/1"
    code, out, _ = run(capsys, "refute", "x^2+y^2", "--curve", "t,t^2")
    assert code == 2
    code, _, _ = run(capsys, "refute", "x^2+y^2", "--curve", "t")
    assert code == 64


def test_refute_grid_point_is_not_refutation(capsys):
    code, out, _ = run(capsys, "refute", "x^2-4*x^3", "--json")
    assert code == 2
    data = json.loads(out)
    assert data["reason"] == "negative-point-in-box"


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "x^2+y^2", "--depth", "2", "--json")
    assert code == 0 and json.loads(out)["minimum"] == "0/1"
    code, out, _ = run(capsys, "oracle", "x^2-4*x^3", "--depth", "1")
    assert code == 1 and "minimum: -3/1" in out


def test_errors(capsys):
    code, _, err = run(capsys, "check", "x^-1")
    assert code == 65 and "^" in err
    with pytest.raises(SystemExit) as info:
        main(["frobnicate", "x"])
    assert info.value.code == 64
    with pytest.raises(SystemExit) as info:
        main(["check", "x", "--m-max", "-1"])
    assert info.value.code == 64
    code, _, _ = run(capsys, "oracle", "x", "--box", "zero")
    assert code == 64


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "localnonneg", "check", "x^2+y^2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "verdict: certified" in r.stdout
