import json

import pytest

from cohft.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_nilpotency_exit_zero(capsys):
    code, out, _ = run(capsys, "verify", "dw", "--suite", "nilpotency", "--trials", "1")
    assert code == 0 and "all pass" in out


def test_verify_unknown_theory(capsys):
    code, _, err = run(capsys, "verify", "bogus")
    assert code == 2 and "unknown theory" in err


def test_verify_unknown_suite(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "dw", "--suite", "bogus"])
    assert exc.value.code == 2


def test_verify_inapplicable_suite(capsys):
    code, _, _ = run(capsys, "verify", "dw", "--suite", "kw")
    assert code == 2


def test_verify_failure_exit_one(capsys):
    code, out, _ = run(capsys, "verify", "gsw", "--suite", "vector-susy", "--trials", "1")
    assert code == 1 and "FAIL" in out


def test_verify_json_is_byte_identical(capsys):
    args = ("verify", "gsw", "--suite", "all", "--seed", "7", "--trials", "1", "--json")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    d = json.loads(a)
    assert d["theory"] == "gsw_so3"
    assert all(r["duration_ms"] is None for r in d["reports"])


def test_seed_env_and_flag_precedence(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("COHFT_SEED", "11")
    _, out, _ = run(capsys, "verify", "dw", "--suite", "brst", "--trials", "1", "--json")
    assert json.loads(out)["reports"][0]["seed"] == 11
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"seed": 5, "trials": 1}))
    _, out, _ = run(capsys, "verify", "dw", "--suite", "brst", "--config", str(cfg), "--json")
    assert json.loads(out)["reports"][0]["seed"] == 5
    _, out, _ = run(capsys, "verify", "dw", "--suite", "brst", "--config", str(cfg), "--seed", "3", "--json")
    assert json.loads(out)["reports"][0]["seed"] == 3


def test_bad_config(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"colour": 1}))
    code, _, err = run(capsys, "verify", "dw", "--config", str(cfg))
    assert code == 2 and "unknown config keys" in err


def test_expand(capsys):
    code, out, _ = run(capsys, "expand", "dw", "min")
    assert code == 0 and "⟨χ, d_A⁺ψ⟩" in out
    _, again, _ = run(capsys, "expand", "dw", "min")
    assert out == again
    _, kw, _ = run(capsys, "expand", "kw", "standard")
    assert "χ̃" in kw and "⟨χ, d_A⁺ψ⟩" in kw


def test_expand_latex(capsys):
    code, out, _ = run(capsys, "expand", "dw", "standard", "--latex")
    assert code == 0 and out.startswith("\\documentclass") and "\\end{document}" in out


def test_export(capsys):
    code, out, _ = run(capsys, "export", "kw")
    assert code == 0 and json.loads(out)["schema"] == "cohft-theory/1"


def test_toy_euler(capsys):
    code, out, _ = run(capsys, "toy", "euler", "--t", "0", "--vf", "zero")
    assert code == 0
    assert out.splitlines()[1].split(",")[1] == "2.000000"


def test_toy_ph(capsys):
    code, out, _ = run(capsys, "toy", "ph", "--vf", "grad-height", "--tmax", "-1e4")
    assert code == 0
    assert abs(float(out.splitlines()[1].split(",")[1]) - 2) < 1e-3


def test_toy_ph_zero_field_is_usage_error(capsys):
    code, _, _ = run(capsys, "toy", "ph", "--vf", "zero")
    assert code == 2


def test_toy_sweep_and_unknown_field(capsys):
    code, out, _ = run(capsys, "toy", "sweep", "--vf", "rotation", "--ts", "0,-1,-10")
    assert code == 0 and len(out.splitlines()) == 4
    code, _, _ = run(capsys, "toy", "euler", "--vf", "bogus")
    assert code == 2


def test_toy_aj(capsys):
    code, out, _ = run(capsys, "toy", "aj", "--json")
    assert code == 0 and json.loads(out)["agree"]


def test_equivariant_check_reports(capsys):
    code, out, _ = run(capsys, "equivariant", "check", "--g", "su2", "--module", "ce")
    assert "PASS d_CE = d_K" in out
    assert code in (0, 1)
    code, _, _ = run(capsys, "equivariant", "check", "--g", "su2", "--module", "bogus")
    assert code == 2
