import io
import json
import subprocess
import sys

import pytest

from soncgp.cli import main

from conftest import EX1, EX3


@pytest.fixture
def poly_file(tmp_path):
    def write(text, name="f.poly"):
        p = tmp_path / name
        p.write_text(text + "\n")
        return str(p)

    return write


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_bound_json(poly_file):
    code, out, _ = run("bound", poly_file(EX1), "--nvars", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["f_gp"] == pytest.approx(-3.75, abs=1e-8)
    assert doc["m_star"] == pytest.approx(4.0, abs=1e-8)
    assert [a["value"] for a in doc["a_star"]] == pytest.approx([1, 1], abs=1e-6)


def test_text_and_json_agree(poly_file):
    path = poly_file(EX3)
    _, text, _ = run("bound", path, "--nvars", "2")
    _, js, _ = run("bound", path, "--nvars", "2", "--format", "json")
    doc = json.loads(js)
    fields = dict(line.split(": ", 1) for line in text.splitlines())
    assert float(fields["f_gp"]) == pytest.approx(doc["f_gp"], rel=1e-9)
    assert fields["f_gp"] == f"{doc['f_gp']:.10g}"


def test_bound_empty_delta(poly_file):
    code, out, _ = run("bound", poly_file("1 + x1^2"), "--format", "json")
    assert code == 0 and json.loads(out)["f_gp"] == 1


def test_bound_verify(poly_file):
    code, out, _ = run("bound", poly_file(EX1), "--verify", "--format", "json")
    assert code == 0 and json.loads(out)["verified"] is True


def test_certify(poly_file):
    code, out, _ = run("certify", poly_file(EX1), "--nvars", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    cert = doc["certificate"]
    assert cert["r"] == pytest.approx(-3.75, abs=1e-8)
    (circuit,) = cert["circuits"]
    assert circuit["status"] == "binomial-SOS" and circuit["beta"] == [3, 3]
    assert doc["binomial_sos"] is True


def test_certify_motzkin_is_not_binomial(poly_file):
    code, out, _ = run("certify", poly_file("1/3 + 1/3*x1^4*x2^2 + 1/3*x1^2*x2^4 - x1^2*x2^2"), "--format", "json")
    doc = json.loads(out)
    assert doc["certificate"]["circuits"][0]["status"] == "nonneg-circuit"
    assert doc["binomial_sos"] is False


def test_mediated():
    code, out, _ = run("mediated", "--vertices", "0,0;6,0;0,6", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["size"] == 28 and doc["is_h_simplex"] is True
    code, out, _ = run("mediated", "--vertices", "0,0;4,2;2,4")
    assert "is_h_simplex: False" in out and "size: 6" in out


def test_constrained(poly_file):
    f = poly_file("1 + x1^2")
    g = poly_file("x1 - 1", "g.poly")
    code, out, _ = run("constrained-bound", f, "--g", g, "--nvars", "1", "--format", "json")
    assert code == 0 and json.loads(out)["bound"] == pytest.approx(2.0, abs=1e-6)


def test_oracle(poly_file):
    code, out, _ = run("oracle", poly_file(EX1), "--format", "json", "--seed", "3")
    doc = json.loads(out)
    assert code == 0 and doc["best_value"] == pytest.approx(-3.75, abs=1e-6) and doc["seed"] == 3


def test_exit_codes(poly_file):
    code, _, err = run("bound", poly_file("1 + x1^^2"))
    assert code == 2 and "position" in err
    code, out, _ = run("bound", poly_file("1 + x1^3"), "--format", "json")
    assert code == 3 and json.loads(out)["error"] == "OddVertex"
    code, out, _ = run("bound", poly_file("1 + x1^2 + x2^2 - 3*x1*x2"), "--format", "json")
    assert code == 4 and json.loads(out)["exit_code"] == 4
    code, _, _ = run("bound", "/nonexistent/file.poly")
    assert code == 2
    assert run("bound")[0] == 2
    assert run("mediated", "--vertices", "a,b")[0] == 2
    assert run("mediated", "--vertices", "0,0;3,0")[0] == 3
    assert run("bound", poly_file(EX1), "--tol", "0")[0] == 2


def test_verify_failure_exit_code(poly_file, monkeypatch):
    import soncgp.cli as cli

    monkeypatch.setattr(cli, "check_lower_bound", lambda *a, **k: False)
    code, out, _ = run("bound", poly_file(EX1), "--verify", "--format", "json")
    assert code == 1 and json.loads(out)["verified"] is False


def test_module_entry_point(poly_file):
    proc = subprocess.run([sys.executable, "-m", "soncgp", "bound", poly_file(EX1), "--nvars", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "f_gp: -3.75" in proc.stdout
