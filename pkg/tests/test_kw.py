from fractions import Fraction

import pytest

from cohft.field_calculus import kw as K
from cohft.field_calculus.theories import builtin_theory


@pytest.fixture(scope="module")
def T():
    return builtin_theory("kw")


def test_simplified_rules_except_w(T):
    r = K.kw_complexify(T, trials=1)
    assert {k for k, v in r.items() if not v} <= {"Q w_c"}
    for k in ("Q A_c", "Q psi_c", "Q chi_c", "Q b_c", "Q eta_c", "Q lambda", "(chi_c)_- = 0",
              "Im(d*_{A_c} A_c) = d*_A sigma"):
        assert r[k], k


def test_literal_im_reading_breaks_eta(T):
    r = K.kw_complexify(T, trials=1, reading="literal")
    assert not r["Q eta_c"]


def test_unknown_reading(T):
    with pytest.raises(ValueError):
        K.im_codiff(K.complex_fields(T)["A_c"], T.f("A"), "other")


@pytest.mark.parametrize("cs", [(1, 0), (0, 1), (Fraction(3, 5), Fraction(4, 5))])
def test_family_equations_and_nilpotency(T, cs):
    r = K.kw_family(cs, T, trials=1)
    assert r["equations"]
    assert r["nilpotency"]


def test_family_identity_angle(T):
    assert K.kw_family((1, 0), T, trials=1)["action"]


def test_off_circle_rejected(T):
    with pytest.raises(ValueError):
        K.family_equations(T, (1, 1))
