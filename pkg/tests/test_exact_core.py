from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cohft.exact_core import (
    AntisymMatrix, ExactScalar, GrassmannElement, NonTerminatingSeries, berezin, determinant, exp_nilpotent,
    matrix_inverse, odd_gaussian_integral, pfaffian,
)
from strategies import antisym, grassmann, scalars


@given(scalars, scalars, scalars)
def test_scalar_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    if a:
        assert a * a.inverse() == ExactScalar(1)


def test_scalar_rejects_floats():
    with pytest.raises(TypeError):
        ExactScalar.coerce(1j)


def test_i_squared():
    i = ExactScalar(0, 1)
    assert i * i == ExactScalar(-1)


@given(grassmann(), grassmann(), grassmann())
def test_grassmann_associative(a, b, c):
    assert ((a * b) * c - a * (b * c)).is_zero()


@given(grassmann(parity=1), grassmann(parity=1))
def test_odd_elements_anticommute(a, b):
    assert (a * b + b * a).is_zero()


@given(grassmann(parity=0), grassmann())
def test_even_elements_are_central(a, b):
    assert (a * b - b * a).is_zero()


def test_generator_squares_to_zero():
    e = GrassmannElement.generator(2, 4)
    assert (e * e).is_zero()


def test_index_validation():
    with pytest.raises(ValueError):
        GrassmannElement({(2, 1): 1}, 4)
    with pytest.raises(ValueError):
        GrassmannElement({(5,): 1}, 4)


def test_berezin_orientation():
    e1, e2 = GrassmannElement.generator(1, 2), GrassmannElement.generator(2, 2)
    # ∫dε_1 dε_2 ε_1ε_2: derivative in ε_2 first
    assert berezin(e1 * e2, [1, 2]).body() == -1
    assert berezin(e1 * e2, [2, 1]).body() == 1


@pytest.mark.parametrize("dim", [2, 4, 6])
@given(data=st.data())
def test_pfaffian_squared_is_determinant(dim, data):
    M = data.draw(antisym(dim))
    assert pfaffian(M) ** 2 == determinant(M)


def test_pfaffian_2x2_oracle():
    assert pfaffian([[0, Fraction(3)], [Fraction(-3), 0]]) == 3


def test_pfaffian_odd_dimension_is_zero_or_error():
    with pytest.raises(ValueError):
        pfaffian([[0, 1, 0], [-1, 0, 0], [0, 0, 0]])


def test_antisym_validation():
    with pytest.raises(ValueError):
        AntisymMatrix([[0, 1], [1, 0]])


@given(antisym(4))
def test_inverse_times_matrix(M):
    if determinant(M) == 0:
        with pytest.raises(ZeroDivisionError):
            matrix_inverse(M)
        return
    inv = matrix_inverse(M)
    for i in range(4):
        for j in range(4):
            assert sum(M[i][k] * inv[k][j] for k in range(4)) == (1 if i == j else 0)


@given(grassmann(n=6, parity=0))
def test_exp_nilpotent_is_homomorphism(a):
    a = a - GrassmannElement.scalar(a.body(), 6)
    b = a.scale(Fraction(1, 3))
    lhs = exp_nilpotent(a) * exp_nilpotent(b)
    assert (lhs - exp_nilpotent(a + b)).is_zero()


def test_exp_nilpotent_rejects_body():
    with pytest.raises(ValueError):
        exp_nilpotent(GrassmannElement.scalar(1, 2))


def test_exp_nilpotent_term_bound():
    e = GrassmannElement({(1, 2): 1, (3, 4): 1}, 4)
    with pytest.raises(NonTerminatingSeries):
        exp_nilpotent(e, max_terms=1)


@given(antisym(4), st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=2), min_size=4, max_size=4))
def test_odd_gaussian_integral_two_routes(M, cs):
    if determinant(M) == 0:
        return
    n = 6
    eta = [GrassmannElement.generator(1, n), GrassmannElement.generator(2, n)]
    B = [eta[i % 2].scale(c) for i, c in enumerate(cs)]
    r = odd_gaussian_integral(M, B, n=n, chi_offset=2)
    assert (r.expansion - r.closed_form).is_zero()


def test_odd_gaussian_integral_no_source_is_pfaffian():
    M = [[0, 2, 0, 0], [-2, 0, 0, 0], [0, 0, 0, 5], [0, 0, -5, 0]]
    r = odd_gaussian_integral(M)
    assert r.value.body() == 10
