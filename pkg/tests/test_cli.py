import json
import subprocess
import sys

import pytest

from powerops.cli import main

PSI_ALPHA0 = "alpha^0: h^5 - 10h^4 - 1065h^3 + 12690h^2 + 168930h - 1462250"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_psi(capsys):
    code, out, _ = run(capsys, "psi", "--expr", "h")
    assert code == 0
    assert out.splitlines()[0] == PSI_ALPHA0
    assert len(out.splitlines()) == 6


def test_psi_json(capsys):
    code, out, _ = run(capsys, "psi", "--expr", "h", "--format", "json")
    assert json.loads(out)["coordinates"][5] == "-h^4 + 10h^3 + 790h^2 - 8440h - 46680"


def test_hecke_weighted(capsys):
    code, out, _ = run(capsys, "hecke", "--op", "weighted", "--weight", "12", "--expr", "h-26")
    assert (code, out.strip()) == (0, "4830*(h-26)")


def test_hecke_t1_and_t2(capsys):
    _, out, _ = run(capsys, "hecke", "--op", "t1", "--expr", "h - 26")
    assert out.strip() == "(1/5)*(h^4 + 16h^3 - 924h^2 - 5584h + 122246)*(h-26)"
    _, out, _ = run(capsys, "hecke", "--op", "t2", "--expr", "h")
    assert out.strip() == "(1/25)*(h)"


def test_hecke_weighted_needs_weight(capsys):
    code, _, err = run(capsys, "hecke", "--op", "weighted", "--expr", "h")
    assert code == 2 and "--weight" in err


def test_log_op(capsys):
    code, out, _ = run(capsys, "log-op", "--expr", "(h-26)^2")
    assert (code, out.strip()) == (0, "0")
    code, _, err = run(capsys, "log-op", "--expr", "h")
    assert code == 3 and "NonUnitError" in err


def test_gamma(capsys):
    code, out, _ = run(capsys, "gamma", "--emit", "presentation")
    assert code == 0 and out.startswith("Commutation relations")
    _, out, _ = run(capsys, "gamma", "--emit", "presentation", "--format", "json")
    assert set(json.loads(out)) >= {"commutation", "adem", "cartan"}
    _, out, _ = run(capsys, "gamma", "--emit", "rewrite", "--expr", "Q5*Q0")
    assert out.startswith("Q0Q1 + (h)*Q0Q2 + (h^2 - 275)*Q0Q3")


def test_gamma_center(capsys):
    _, out, _ = run(capsys, "gamma", "--check-center", "t2")
    assert out.strip().endswith("t2~ is central")
    _, out, _ = run(capsys, "gamma", "--check-center", "t1", "--format", "json")
    assert json.loads(out)["central"] is False


def test_qseries(capsys):
    _, out, _ = run(capsys, "qseries", "--op", "delta", "--trunc", "5")
    assert out.strip() == "q - 24*q^2 + 252*q^3 - 1472*q^4 + 4830*q^5 + O(q^6)"
    _, out, _ = run(capsys, "qseries", "--op", "hecke", "--prime", "5")
    assert out.startswith("T_5 Delta = 4830 * Delta")
    _, out, _ = run(capsys, "qseries", "--op", "serre", "--trunc", "20")
    assert out.strip() == "O(q^21)"
    for op in ("e2", "log-delta", "f1"):
        code, _, _ = run(capsys, "qseries", "--op", op, "--prime", "3", "--trunc", "12")
        assert code == 0


def test_derive_model_unknown_curve(capsys):
    code, _, err = run(capsys, "derive-model", "--curve", "c9")
    assert code == 2 and "unknown curve" in err


def test_model_file_option(capsys, tmp_path, data):
    from powerops import modelfile
    path = tmp_path / "m.json"
    modelfile.save(data, path)
    _, out, _ = run(capsys, "psi", "--model", str(path), "--expr", "h")
    assert out.splitlines()[0] == PSI_ALPHA0
    code, _, _ = run(capsys, "psi", "--model", str(tmp_path / "missing.json"), "--expr", "h")
    assert code == 2
    (tmp_path / "bad.json").write_text("{}")
    code, _, err = run(capsys, "psi", "--model", str(tmp_path / "bad.json"), "--expr", "h")
    assert code == 3 and "schema" in err


def test_parse_error_exit(capsys):
    code, _, err = run(capsys, "psi", "--expr", "h +* 1")
    assert code == 2 and "position 3" in err


def test_precision_flags(capsys):
    _, out, _ = run(capsys, "log-op", "--expr", "1+h", "--h-prec", "6", "--p-prec", "4")
    assert out.count("h") and "h^6" not in out


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--check", "4", "--check", "10")
    assert code == 0
    assert out.splitlines()[-1] == "2/2 checks passed"
    code, out, _ = run(capsys, "verify", "--check", "11", "--format", "json")
    assert json.loads(out)[0]["passed"] is True


def test_verify_needs_selection(capsys):
    assert run(capsys, "verify")[0] == 2


def test_usage_error_from_argparse():
    with pytest.raises(SystemExit) as info:
        main(["hecke", "--op", "t3", "--expr", "h"])
    assert info.value.code == 2


def test_deterministic_and_module_entry_point():
    cmd = [sys.executable, "-m", "powerops", "gamma", "--emit", "rewrite", "--expr", "Q3 h Q0"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a.strip()
