import json

import jsonschema
import pytest

from paragroups.cli import ANCHORS, RunConfig, UsageError, main, report_schema


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_nf_and_order(capsys):
    assert run(capsys, "nf", "--p", "3", "a^4")[:2] == (0, "a\n")
    assert run(capsys, "nf", "--p", "3", "a*b^-1")[1] == "a*b^2\n"
    assert run(capsys, "order", "--p", "3", "a*b")[1] == "inf\n"
    assert run(capsys, "order", "--p", "3", "b*a*b^-1")[1] == "3\n"
    code, out, _ = run(capsys, "nf", "--p", "3", "--k", "2", "--json", "b^10")
    assert json.loads(out)["normal_form"] == "b"


def test_tc(capsys):
    assert run(capsys, "tc", "--pres", "<a|a^3>")[:2] == (0, "3\n")
    code, out, _ = run(capsys, "tc", "--pres", "<a|a^3>", "--csv")
    assert out.splitlines()[1] == "coset,a,a^-1"
    code, _, err = run(capsys, "tc", "--pres", "<a,b|a^3,b^3>", "--subgroup", "a",
                       "--max-cosets", "100")
    assert code == 2 and "inconclusive" in err


def test_env_override(capsys, monkeypatch):
    monkeypatch.setenv("PARAFREE_MAX_COSETS", "5")
    assert run(capsys, "tc", "--pres", "<a|a^7>")[0] == 2


def test_rs_json(capsys):
    code, out, _ = run(capsys, "rs", "--pres", "<a,b | a[a^3,b], b^3>", "--map", "a:0,b:1",
                       "--modulus", "3", "--order", "ba")
    data = json.loads(out)
    assert code == 0 and data["index"] == 3
    assert data["transversal"] == ["1", "b", "b^2"]
    assert data["invariant_factors"] == [1, 1, 19]
    assert len(data["relation_matrix"]) == 3


def test_abelianize_and_det(capsys, tmp_path):
    assert json.loads(run(capsys, "abelianize", "--pres", "<a,b | (a*[b,a])^3, b^3>")[1]) == [3, 3]
    f = tmp_path / "m.csv"
    f.write_text("-3,2,0\n0,-3,2\n-2,0,3\n", encoding="utf-8")
    assert run(capsys, "det", str(f))[1] == "19\n"
    f.write_text("1,2,3\n", encoding="utf-8")
    assert run(capsys, "det", str(f))[0] == 3


def test_lcs_compare(capsys):
    code, out, _ = run(capsys, "lcs-compare", "--p", "3", "--family", "G1", "--max-class", "3")
    assert code == 0 and "pass" in out
    code, out, _ = run(capsys, "lcs-compare", "--p", "3", "--pres", "<a,b|a^3,b^3,[a,b]>",
                       "--max-class", "3", "--json")
    assert code == 1
    assert json.loads(out)["classes"][1]["verdict"] == "mismatch"


def test_gog_search(capsys):
    code, out, _ = run(capsys, "gog-search", "--p", "3", "--n", "2")
    assert code == 0
    assert "1/3 = 1/3" in out and "1 admissible tree" in out
    code, out, _ = run(capsys, "gog-search", "--p", "5", "--n", "4", "--json")
    data = json.loads(out)
    assert len(data["trees"]) == 1 and data["shapes"] == 2


def test_matrix_a(capsys):
    code, out, _ = run(capsys, "matrix-a", "--p", "3")
    assert code == 0 and "19 = 3^3 - 2^3" in out
    with pytest.warns(UserWarning):
        code, out, err = run(capsys, "matrix-a", "--p", "2", "--json")
    assert json.loads(out)["abs_det"] == 3


def test_usage_errors(capsys):
    assert run(capsys, "nf", "--p", "4", "a")[0] == 3
    assert run(capsys, "tc", "--pres", "<a | a^0>")[0] == 3
    assert run(capsys, "tc", "--pres", "<a | b>")[0] == 3
    assert run(capsys, "rs", "--pres", "<a|a^3>", "--map", "a=1", "--modulus", "3")[0] == 3
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 3


def test_run_config():
    assert RunConfig().max_cosets == 100_000
    with pytest.raises(UsageError):
        RunConfig(p=9)
    with pytest.raises(UsageError):
        RunConfig(max_class=0)
    with pytest.warns(UserWarning):
        RunConfig(p=2)


def test_verify_paper_json(capsys):
    code, out, _ = run(capsys, "verify-paper", "--p", "3", "--max-class", "3", "--json")
    report = json.loads(out)
    jsonschema.validate(report, report_schema())
    assert code == 0 and report["status"] == "pass"
    assert {c["paper_ref"] for c in report["checks"]} <= set(ANCHORS.values())
    code2, out2, _ = run(capsys, "verify-paper", "--p", "3", "--max-class", "3", "--json")
    assert out == out2
