"""Hypothesis strategies shared by the tests."""

from fractions import Fraction

from hypothesis import strategies as st

from cohft.exact_core import ExactScalar, GrassmannElement
from cohft.torus_forms import FourierForm

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)
nonzero_fractions = small_fractions.filter(lambda q: q != 0)
scalars = st.builds(ExactScalar, small_fractions, small_fractions)


@st.composite
def grassmann(draw, n=4, max_terms=4, parity=None):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        k = tuple(sorted(draw(st.sets(st.integers(1, n), max_size=n))))
        if parity is not None and len(k) % 2 != parity:
            continue
        terms[k] = draw(small_fractions)
    return GrassmannElement(terms, n)


@st.composite
def antisym(draw, dim):
    M = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            v = draw(st.fractions(min_value=-4, max_value=4, max_denominator=3))
            M[i][j], M[j][i] = v, -v
    return M


@st.composite
def forms(draw, degree=None, n=4, cutoff=1, max_terms=3, m=1):
    out = FourierForm.zero(n, m)
    for _ in range(draw(st.integers(1, max_terms))):
        freq = tuple(draw(st.integers(-cutoff, cutoff)) for _ in range(n))
        k = degree if degree is not None else draw(st.integers(0, n))
        idx = tuple(sorted(draw(st.permutations(range(n)))[:k]))
        out = out + FourierForm.mode(freq, idx, draw(st.integers(0, m - 1)), draw(scalars), (), n, m)
    return out
