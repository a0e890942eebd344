import io
import json

import pytest

from shapovalov.cli import main


def run(argv):
    buf = io.StringIO()
    code = main(argv, out=buf)
    return code, buf.getvalue()


def test_roots_a2():
    code, out = run(["roots", "A2"])
    assert code == 0
    assert "positive roots (3):" in out
    assert "(1,1)" in out and "rho" in out


def test_hasse_g2_counts():
    code, out = run(["hasse", "G2"])
    assert code == 0
    assert "nodes (8)" in out and "edges (7)" in out


def test_hasse_dot_output():
    code, out = run(["hasse", "A2", "--dot"])
    assert code == 0
    assert out.startswith("digraph") and "->" in out


def test_hasse_interval_restriction():
    code, out = run(["hasse", "G2", "--interval", "1,0", "2,3"])
    assert code == 0
    assert "nodes (5)" in out and "edges (4)" in out
    assert "f[0,1]" not in out


def test_theta_json_schema():
    code, out = run(["theta", "A2", "--beta", "1,1", "-m", "1", "--json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["algebra"] == "A2" and doc["beta"] == [1, 1] and doc["m"] == 1
    assert doc["terms"]
    for term in doc["terms"]:
        assert set(term) == {"monomial", "num", "den"}
        for root, exp in term["monomial"]:
            assert isinstance(exp, int) and exp >= 1


def test_theta_respects_alpha_flag():
    code1, out1 = run(["theta", "G2", "--beta", "2,3", "--alpha", "1",
                       "--json"])
    code2, out2 = run(["theta", "G2", "--beta", "2,3", "--alpha", "2",
                       "--json"])
    assert code1 == code2 == 0
    assert json.loads(out1)["alpha"] == 0
    assert json.loads(out2)["alpha"] == 1


def test_verify_passes_for_small_case():
    code, out = run(["verify", "A2", "--beta", "1,1", "-m", "2", "--json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["status"] == "PASS"
    assert doc["symbolic"]["status"] == "PASS"
    assert len(doc["samples"]) == 3


def test_gram_reports_kernel():
    code, out = run(["gram", "A2", "--lambda", "1/3,0", "--mu", "1,1",
                     "--json"])
    assert code == 0
    doc = json.loads(out)
    assert len(doc["gram"]) == 2


def test_oracle_compare_command():
    code, out = run(["oracle-compare", "A2", "--beta", "1,1", "-m", "1",
                     "--samples", "3"])
    assert code == 0
    assert out.strip().endswith("PASS")


@pytest.mark.parametrize("argv", [
    ["roots", "Q9"],
    ["theta", "A2", "--beta", "2,1"],
    ["theta", "A2", "--beta", "1,1", "-m", "0"],
    ["theta", "A2", "--beta", "1,1", "--alpha", "3"],
    ["theta", "A2", "--beta", "one,one"],
    ["gram", "A2", "--lambda", "1/0,2", "--mu", "1,1"],
])
def test_usage_errors_exit_one(argv, capsys):
    assert main(argv, out=io.StringIO()) == 1
