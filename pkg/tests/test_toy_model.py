import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cohft import toy_model as tm

FIELDS = ["grad-height", "rotation", "dipole"]
fr = st.fractions(min_value=-4, max_value=4, max_denominator=5)


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


points = st.tuples(*(st.floats(-1, 1) for _ in range(3))).filter(lambda v: np.linalg.norm(v) > 0.1).map(unit)


def test_area_and_frame():
    S = tm.SurfaceModel()
    assert abs(S.area() - 4 * math.pi) < 1e-12
    n = unit([0.3, -0.2, 0.9])
    e1, e2 = S.frame(n)
    assert abs(e1 @ e2) < 1e-14 and abs(e1 @ e1 - 1) < 1e-14 and abs(e1 @ n) < 1e-14


@pytest.mark.parametrize("vf", FIELDS)
def test_fields_are_tangent(vf):
    f = tm.vector_field(vf)
    for n in (unit([1, 2, 3]), unit([-1, 0.5, -0.2]), unit([0.1, -0.9, 0.3])):
        assert abs(f.value(n) @ n) < 1e-14


def test_t_zero_value():
    assert tm.euler_form("zero", 0, unit([1, 1, 1]))["value"] == pytest.approx(1 / (2 * math.pi), abs=1e-15)


@given(points, st.floats(-5, 5))
def test_zero_field_is_t_independent(n, t):
    assert tm.euler_form("zero", t, n)["value"] == pytest.approx(1 / (2 * math.pi), abs=1e-12)


@pytest.mark.parametrize("vf", FIELDS)
@given(n=points, t=st.floats(-8, 8).filter(lambda t: abs(t) > 1e-6))
def test_routes_agree(vf, n, t):
    r = tm.euler_form(vf, t, n)
    assert abs(r["route_i"] - r["route_ii"]) <= 1e-9


@pytest.mark.parametrize("vf", FIELDS)
@given(n=points, t=st.floats(0.1, 8))
def test_routes_agree_ift(vf, n, t):
    r = tm.euler_form(vf, t, n, ift=True)
    assert abs(r["route_i"] - r["route_ii"]) <= 1e-9


@pytest.mark.parametrize("vf", FIELDS)
@given(n=points, t=st.floats(-5, 5))
def test_basicness(vf, n, t):
    assert tm.basicness(vf, t, n) < 1e-9


@pytest.mark.parametrize("vf", FIELDS)
@given(n=points.filter(lambda v: 0.05 < abs(v[2]) < 0.85 or abs(v[2]) >= 0.95))
def test_connection_route(vf, n):
    assert tm.connection_route_check(vf, n) < 1e-9


@given(st.lists(fr, min_size=2, max_size=2), st.lists(st.lists(fr, min_size=2, max_size=2), min_size=2, max_size=2),
       st.lists(fr, min_size=2, max_size=2), fr, st.lists(fr, min_size=2, max_size=2))
def test_qj_exactness(F, dF, a, dA, b):
    assert tm.qj_identity_check(F, dF, a, dA, b)


def test_qj_oracle_point():
    one = Fraction(1)
    assert tm.qj_identity_check([one, 2 * one], [[one, 0], [0, one]], [one, one], 3 * one, [one, -one])


def test_berezin_pins_sign_by_small_t_limit():
    n = unit([0.3, 0.4, 0.5])
    v = tm.euler_form_route_i("grad-height", 1e-7, n)
    assert v == pytest.approx(1 / (2 * math.pi), rel=1e-6)


def test_literal_gaussian_prefactor_slippage():
    r = tm.literal_chain("grad-height", -2.0, unit([0.2, 0.1, 0.9]))
    assert r["second_line_ratio"] == pytest.approx(1.0, abs=1e-12)
    assert r["displayed_gaussian_ratio"] == pytest.approx(2 * math.pi, rel=1e-12)


@pytest.mark.parametrize("vf,expected", [("grad-height", 2), ("rotation", 2), ("dipole", 2)])
def test_index_sum(vf, expected):
    assert tm.index_sum(vf) == expected


def test_local_indices():
    assert tm.index_at("dipole", tm.NORTH) == 2
    assert tm.index_at("grad-height", tm.SOUTH) == 1


def test_index_errors():
    with pytest.raises(ValueError):
        tm.index_sum("zero")
    with pytest.raises(KeyError):
        tm.vector_field("bogus")


def test_gauss_bonnet():
    r = tm.euler_characteristic("zero", 0, (64, 128))
    assert abs(r["value"] - 2) < 1e-6
    assert r["monotone"]


@pytest.mark.parametrize("vf", FIELDS)
def test_sweep_spread(vf):
    s = tm.t_sweep(vf, [0, -1, -10, -100])
    assert s["spread"] < 1e-6


def test_zero_field_column_is_constant():
    s = tm.t_sweep("zero", [0, -1, -10, -100])
    assert len({r["value"] for r in s["rows"]}) == 1


@pytest.mark.parametrize("vf,tol", [("grad-height", 1e-3), ("rotation", 1e-3), ("dipole", 5e-3)])
def test_poincare_hopf(vf, tol):
    r = tm.euler_characteristic(vf, -1e4)
    assert abs(r["value"] - tm.index_sum(vf)) < tol
    assert r["monotone"]


def test_ift_positive_t_is_finite():
    r = tm.euler_characteristic("grad-height", 5.0, ift=True)
    assert abs(r["value"] - 2) < 1e-6


def test_middle_expression_drops_to_zero():
    # ∫Pf(R/2π)exp(t|F|²/4) tends to 0, not χ, for a transversal field
    assert tm.ph_middle_expression("grad-height", -1e4) < 1e-3


def test_grid_parsing():
    assert tm.parse_grid("32x64") == (32, 64)
    with pytest.raises(ValueError):
        tm.parse_grid("2x2")


def test_projection_form():
    r = tm.aj_projection_check(0.0)
    assert r["fibre_volume"] == pytest.approx(1.0, abs=1e-12)
    assert r["agree"]
