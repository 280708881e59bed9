import pytest
from hypothesis import given, strategies as st

from cohft.exact_core import ExactScalar
from cohft.torus_forms import (
    FourierForm, codifferential, decode_freq, encode_freq, exterior_d, hodge_star, inner_density, integrate,
    interior, sd_project, wedge,
)
from strategies import forms


@given(st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_frequency_codec_roundtrip(k):
    assert decode_freq(encode_freq(k), 4) == tuple(k)


@given(forms())
def test_d_squared_zero(a):
    assert exterior_d(exterior_d(a)).is_zero()


@given(forms(degree=2))
def test_star_squared_on_two_forms(a):
    assert (hodge_star(hodge_star(a)) - a).is_zero()


@given(forms(degree=1))
def test_star_squared_on_odd_forms(a):
    assert (hodge_star(hodge_star(a)) + a).is_zero()


@given(forms(degree=2))
def test_sd_projections(a):
    p, m = sd_project(a, 1), sd_project(a, -1)
    assert (p + m - a).is_zero()
    assert (sd_project(p, 1) - p).is_zero()
    assert sd_project(p, -1).is_zero()
    assert (hodge_star(p) - p).is_zero()


def test_sd_projection_rejects_one_form():
    with pytest.raises(ValueError):
        sd_project(FourierForm.dx(0))


@given(forms(degree=1), forms(degree=2))
def test_codifferential_is_adjoint(a, b):
    lhs = integrate(inner_density(exterior_d(a), b), strict=False)
    rhs = integrate(inner_density(a, codifferential(b)), strict=False)
    assert (lhs - rhs).is_zero()


@given(forms(degree=1), forms(degree=2))
def test_leibniz(a, b):
    lhs = exterior_d(wedge(a, b))
    rhs = wedge(exterior_d(a), b) - wedge(a, exterior_d(b))
    assert (lhs - rhs).is_zero()


@given(forms(degree=1), forms(degree=1))
def test_wedge_graded_commutative(a, b):
    assert (wedge(a, b) + wedge(b, a)).is_zero()


@given(forms(degree=2), st.integers(0, 3))
def test_interior_is_antiderivation_square_zero(a, mu):
    assert interior(interior(a, mu), mu).is_zero()


def test_d_of_plane_wave():
    f = FourierForm.mode((1, 0, 0, 0), (), coeff=1)
    df = exterior_d(f)
    assert (df - FourierForm.mode((1, 0, 0, 0), (0,), coeff=ExactScalar(0, 1))).is_zero()


def test_integrate_needs_top_form():
    with pytest.raises(ValueError):
        integrate(FourierForm.dx(0))
    assert integrate(FourierForm.dx(0, 1, 2, 3)).body() == 1
