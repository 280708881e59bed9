import pytest

from cohft.field_calculus import observables as ob
from cohft.field_calculus.theories import builtin_theory


@pytest.fixture(scope="module")
def dw():
    return builtin_theory("dw")


def test_dw_vector_susy_commutator(dw):
    r = ob.vector_susy_check(dw, trials=1)
    assert r["failing_fields"] == []
    assert r["consistency"]


def test_no_K_rule_recorded(dw):
    r = ob.vector_susy_check(dw, trials=1)
    assert set(r["no_K_rule"]) >= {"eta", "lambda"}


def test_theta_K_structure(dw):
    r = ob.theta_K_expansion(dw, trials=1)
    assert r["theta_K_structural"]
    assert r["phi_K_matches"]
    assert r["K5_theta_zero"]


def test_descent_first_equations_hold(dw):
    r = ob.descent_observable(dw, trials=1)
    ids = r["identities"]
    assert ids["Q O^(0) = 0"]
    assert ids["Q O^(1) = d O^(0)"]


def test_descent_equations_hold_with_sign_flipped_curvature(dw):
    # 𝔽 = φ - ψ - F: every descent equation QO^(p) = dO^(p-1) holds
    r = ob.descent_observable(dw, trials=1, F_sign=-1)
    ids = r["identities"]
    for p in range(1, 5):
        assert ids[f"Q O^({p}) = d O^({p - 1})"], p


def test_hol_exp_trace_matches_display(dw):
    r = ob.hol_identity(dw, trials=1)
    assert r["display"]
    assert r["intermediate_even"]
