import pytest

from cohft.exact_core import ExactScalar
from cohft.rep_theory import (
    gamma_matrices, lie_algebra, madd, mcomm, meye, mequal, mmul, mscale, mtrace, so3_monopole_module, sw_module,
)

E = ExactScalar


@pytest.mark.parametrize("name", ["u1", "su2", "so3", "so4", "u2"])
def test_jacobi_and_orthonormality(name):
    g = lie_algebra(name)
    assert g.jacobi_ok()
    P = g.pairing_matrix
    assert all(P[a][b] == (E(1) if a == b else E(0)) for a in range(g.dim) for b in range(g.dim))


@pytest.mark.parametrize("name", ["su2", "so3", "u2"])
def test_pairing_is_ad_invariant(name):
    g = lie_algebra(name)
    B = g.basis
    for x in B:
        for y in B:
            for z in B:
                assert g.pair(mcomm(x, y), z) + g.pair(y, mcomm(x, z)) == 0


def test_u1_is_abelian_and_su2_is_not():
    assert lie_algebra("u1").is_abelian()
    assert not lie_algebra("su2").is_abelian()


def test_unknown_lie_algebra():
    with pytest.raises(KeyError):
        lie_algebra("e8")


@pytest.mark.parametrize("sign", [-1, 1])
def test_clifford_relations(sign):
    gs = gamma_matrices(sign)
    for m in range(4):
        for n in range(4):
            anti = madd(mmul(gs[m], gs[n]), mmul(gs[n], gs[m]))
            want = mscale(meye(4), E(2 * sign)) if m == n else mscale(meye(4), E(0))
            assert mequal(anti, want)


@pytest.mark.parametrize("make", [sw_module, so3_monopole_module])
def test_chiral_projectors(make):
    M = make()
    P, Q = M.P[1], M.P[-1]
    assert mequal(mmul(P, P), P)
    assert mequal(mmul(P, Q), mscale(meye(4), E(0)))
    assert mtrace(P) == 2


@pytest.mark.parametrize("make", [sw_module, so3_monopole_module])
def test_module_is_representation(make):
    M = make()
    g = M.g
    for a, x in enumerate(g.basis):
        for b, y in enumerate(g.basis):
            lhs = mcomm(M.rep[a], M.rep[b])
            coords = g.coordinates(mcomm(x, y))
            rhs = mscale(M.rep[0], E(0))
            for c, v in enumerate(coords):
                rhs = madd(rhs, mscale(M.rep[c], v))
            assert mequal(lhs, rhs)
