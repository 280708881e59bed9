import pytest

from cohft.equivariant import equivariant_suite, kalkman_conjugation_check, module_algebra
from cohft.rep_theory import lie_algebra

GROUPS = ["u1", "su2", "so3"]
MODULES = ["ground", "ce", "weil"]
LITERAL = ("T d_K T^-1", "T (iota_a", "T (Lie_a")


@pytest.mark.parametrize("g", GROUPS)
@pytest.mark.parametrize("module", MODULES)
def test_structural_checks(g, module):
    rep = equivariant_suite(g, module, 4)
    structural = {k: v for k, v in rep["checks"].items() if not k.startswith(LITERAL)}
    assert all(structural.values()), [k for k, v in structural.items() if not v]


@pytest.mark.parametrize("g", GROUPS)
@pytest.mark.parametrize("module", MODULES)
def test_reversed_conjugation_holds(g, module):
    rep = equivariant_suite(g, module, 4)
    assert all(rep["reversed_conjugation"].values())


def test_u1_contraction_counterexample():
    # T = exp(θ⊗ι); on the generator w of Λ(u(1)^∨), T(ι⊗1)T⁻¹ acts as ι⊗1 - 1⊗ι
    g = lie_algebra("u1")
    A = module_algebra(g, "ce", 4)
    rep = kalkman_conjugation_check(g, A, 4)
    name = [k for k in rep if k.startswith("T (iota_a")][0]
    assert not rep[name]["pass"]
    assert rep[name]["mismatches"]


def test_unknown_module():
    with pytest.raises(KeyError):
        module_algebra(lie_algebra("su2"), "bogus", 4)
