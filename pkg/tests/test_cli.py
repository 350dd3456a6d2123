import json

import pytest

from domchain import certificates as cert
from domchain.cli import CSV_COLUMNS, RunConfig, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_params_x6(capsys):
    code, out, _ = run(capsys, "params", "--graph", "X:6", "--p", "gamma_c,gamma_t", "--format", "json")
    doc = json.loads(out)
    vals = {r["param"]: r["value"] for r in doc["results"]}
    assert code == 0 and vals == {"gamma_t": 4, "gamma_c": 6}


def test_params_triangle_cube(capsys):
    code, out, _ = run(capsys, "params", "--graph", "Kn:3x3x3", "--p", "ir,gamma,i,alpha", "--format", "json")
    vals = {r["param"]: r["value"] for r in json.loads(out)["results"]}
    assert code == 0 and vals == {"ir": 4, "gamma": 4, "i": 4, "alpha": 9}


def test_params_csv(capsys):
    code, out, _ = run(capsys, "params", "--graph", "Kn:2x2", "--p", "alpha", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == ",".join(CSV_COLUMNS)
    assert lines[1].startswith("Kn:2x2,alpha,2,computed,")


def test_params_timeout_exit(capsys):
    code, out, _ = run(capsys, "params", "--graph", "Kn:3x3x3x3x3", "--p", "gamma", "--budget-ms", "30")
    assert code == 3 and "in [" in out


def test_params_bad_spec(capsys):
    code, _, err = run(capsys, "params", "--graph", "Q:7")
    assert code == 2 and "SpecParseError" in err


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as e:
        main(["params", "--graph", "X:6", "--frobnicate"])
    assert e.value.code == 2
    with pytest.raises(SystemExit):
        main(["params", "--graph", "X:6", "--budget-ms", "0"])


def test_jacobsthal(capsys):
    code, out, _ = run(capsys, "jacobsthal", "6", "1", "30", "210", "--format", "json")
    rows = json.loads(out)["jacobsthal"]
    assert code == 0 and [r["g"] for r in rows] == [4, 1, 6, 10]


def test_family_bad_q(capsys):
    code, _, err = run(capsys, "family", "--q", "4")
    assert code == 2 and "BadQ" in err


def test_family_unverified(capsys):
    code, out, _ = run(capsys, "family", "--q", "13", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["verified"] is False and len(doc["set"]) == 32
    assert doc["parameters"]["primes"] == [37, 41, 43, 47, 53, 59, 61, 67]


def test_verify_ir_upper(capsys):
    code, out, _ = run(capsys, "verify", "ir-upper", "--spec", "Kab:1,3x1,3x1,3")
    assert code == 0 and "IR ratio bound" in out and "FAIL" not in out


def test_verify_chain_x105(capsys):
    code, out, _ = run(capsys, "verify", "chain", "--graph", "X:105")
    assert code == 0 and out.startswith("pass") and "gamma=4" in out and "alpha=35" in out


def test_verify_gamma4_n1_two(capsys):
    code, out, _ = run(capsys, "verify", "gamma4", "--n", "2,3,3,3")
    assert code == 0 and "table 8, solver 8" in out


def test_verify_misc(capsys):
    assert run(capsys, "verify", "dom-code", "--n", "2,3,4,5")[0] == 0
    assert run(capsys, "verify", "indep-product", "--n", "3,5,7")[0] == 0
    assert run(capsys, "verify", "consecutive", "--n", "6,30,77")[0] == 0
    assert run(capsys, "verify", "closed-forms", "--spec", "Kn:3x3x3")[0] == 0


def test_xn(capsys):
    code, out, _ = run(capsys, "xn", "6", "--format", "json")
    row = json.loads(out)["xn"][0]
    assert code == 0 and (row["g"], row["gamma_c"]) == (4, 6) and row["in_Mc"]["1"] is False


def test_json_is_deterministic(capsys):
    argv = ("params", "--graph", "Kab:2,2x1,3", "--p", "all", "--format", "json")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert cert.canonical_bytes(json.loads(a)) == cert.canonical_bytes(json.loads(b))


def test_recheck_roundtrip(capsys, tmp_path):
    _, out, _ = run(capsys, "params", "--graph", "Kn:2x3x3", "--p", "all", "--format", "json")
    path = tmp_path / "c.json"
    path.write_text(out)
    code, text, _ = run(capsys, "recheck", str(path))
    assert code == 0 and text.count("pass") == 8

    doc = json.loads(out)
    gamma = next(r for r in doc["results"] if r["param"] == "gamma")
    gamma["witness"] = gamma["witness"][:-1]
    gamma["value"] -= 1
    path.write_text(json.dumps(doc))
    code, text, _ = run(capsys, "recheck", str(path))
    assert code == 4 and "FAIL  gamma_witness" in text


def test_set_certificate_recheck():
    doc = cert.set_certificate("indep", "X:105", [0, 1, 2], ["independent", "dominating"])
    assert [c["pass"] for c in doc["checks"]] == [False, False]
    assert all(ok for _, ok in cert.recheck(doc))


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig("params", budget_ms=0)
    with pytest.raises(ValueError):
        RunConfig("params", output="xml")
