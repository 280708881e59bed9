import json

import pytest

from cohft.field_calculus import ir
from cohft.field_calculus.theories import builtin_theory
from cohft.verifier import Identity, SuiteSpec, applicable, check_zero, run_suite, suite_identities


def test_true_identity_passes():
    T = builtin_theory("dw")
    r = check_zero(ir.add(T.Q["A"], ir.neg(T.Q["A"])), T, trials=2)
    assert r["status"] == "pass" and r["trials"] == 2


def test_false_identity_has_counterexample():
    T = builtin_theory("dw")
    r = check_zero(T.f("psi"), T, trials=2, name="psi = 0")
    assert r["status"] == "fail"
    ce = r["counterexample"]
    assert {"seed", "cutoff", "budget", "digest", "monomial"} <= set(ce)
    assert r["minimized"]["cutoff"] == 0


def test_value_identity():
    T = builtin_theory("dw")
    ident = Identity("A - A", value=lambda T, cfg, ev: ev(T.f("A")) - ev(T.f("A")))
    assert check_zero(ident, T, trials=1)["status"] == "pass"


def test_unknown_and_inapplicable_suites():
    T = builtin_theory("dw")
    with pytest.raises(KeyError):
        suite_identities("bogus", T)
    with pytest.raises(ValueError):
        suite_identities("kw", T)
    assert applicable("descent", "dw") and not applicable("descent", "kw")


def test_report_is_deterministic_without_timing():
    a = run_suite(SuiteSpec("brst", "dw", trials=1, seed=4)).to_json(timing=False)
    b = run_suite(SuiteSpec("brst", "dw", trials=1, seed=4)).to_json(timing=False)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["duration_ms"] is None


def test_digest_ignores_timing():
    r = run_suite(SuiteSpec("brst", "dw", trials=1))
    d1 = r.to_json()["digest"]
    r.duration_ms += 1000
    assert r.to_json()["digest"] == d1


def test_exit_code_follows_status():
    r = run_suite(SuiteSpec("brst", "dw", trials=1))
    assert r.passed and r.exit_code == 0
    T = builtin_theory("dw")
    bad = run_suite(SuiteSpec("brst", "dw", trials=1, identities=[Identity("psi", expr=T.f("psi"))]))
    assert bad.exit_code == 1
    assert "FAIL" in bad.text()
