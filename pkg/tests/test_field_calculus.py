import json

import pytest
from hypothesis import given, strategies as st

from cohft.field_calculus import ir
from cohft.field_calculus.actions import action_min, gauge_fermion_min
from cohft.field_calculus.derivation import dual_apply, q_derivation
from cohft.field_calculus.evaluate import Evaluator, random_config
from cohft.field_calculus.schema import dumps, gauge_fermion_invariance, theory_from_json, validate
from cohft.field_calculus.theories import BUILTINS, builtin_theory

THEORIES = sorted(BUILTINS)


@pytest.fixture(scope="module")
def theories():
    return {n: builtin_theory(n) for n in THEORIES}


def test_aliases_resolve():
    assert builtin_theory("gsw").name == "gsw_so3"
    assert builtin_theory("sw").name == "sw_u1"
    with pytest.raises(KeyError):
        builtin_theory("bogus")


@pytest.mark.parametrize("name", THEORIES)
def test_rules_have_declared_bidegree(name, theories):
    assert not theories[name].rule_bidegree_report()


def test_bidegree_errors_are_raised(theories):
    T = theories["dw"]
    with pytest.raises(ir.BidegreeError):
        ir.add(T.f("A"), T.f("phi"))
    with pytest.raises(ir.BidegreeError):
        ir.sd(1, T.f("A"))


@pytest.mark.parametrize("name", THEORIES)
def test_prefix_roundtrip(name, theories):
    T = theories[name]
    for e in T.Q.values():
        assert ir.from_prefix(ir.to_prefix(e), T.fields) == e


@pytest.mark.parametrize("name", ["dw", "sw_u1"])
def test_normalize_is_idempotent(name, theories):
    e = ir.normalize(action_min(theories[name]))
    assert ir.normalize(e) == e


@pytest.mark.parametrize("name", THEORIES)
@given(seed=st.integers(0, 10_000))
def test_q_squared_tree_and_dual_routes(name, seed, theories):
    T = theories[name]
    Q = q_derivation(T)
    cfg = random_config(T, 1, 8, seed)
    ev = Evaluator(T, cfg)
    for n in ("A", "chi", "b"):
        x = T.f(n)
        assert ev(Q.apply(Q.apply(x))).is_zero()
        assert dual_apply(T, T.Q, Q.apply(x), cfg, ev=ev).is_zero()


@pytest.mark.parametrize("name", THEORIES)
def test_dual_route_matches_tree_route(name, theories):
    T = theories[name]
    Q = q_derivation(T)
    cfg = random_config(T, 1, 8, 3)
    ev = Evaluator(T, cfg)
    e = gauge_fermion_min(T)
    assert (ev(Q.apply(e)) - dual_apply(T, T.Q, e, cfg, ev=ev)).is_zero()


@pytest.mark.parametrize("name", THEORIES)
def test_schema_roundtrip(name, theories):
    s = dumps(theories[name])
    assert dumps(theory_from_json(s)) == s
    assert validate(json.loads(s)) == []


def test_schema_rejects_undeclared_rule(theories):
    d = json.loads(dumps(theories["dw"]))
    d["Q"]["ghost"] = "b"
    with pytest.raises(ValueError):
        theory_from_json(d)


@pytest.mark.parametrize("name", THEORIES)
def test_gauge_fermions_invariant(name, theories):
    r = gauge_fermion_invariance(theories[name])
    assert all(r["theta_free"].values())
    assert r["ad_invariant"]


def test_random_config_budget_check(theories):
    with pytest.raises(ValueError):
        random_config(theories["kw"], 1, 2, 0)


def test_random_config_deterministic(theories):
    T = theories["dw"]
    assert random_config(T, 2, 8, 5).digest() == random_config(T, 2, 8, 5).digest()
    assert random_config(T, 2, 8, 5).digest() != random_config(T, 2, 8, 6).digest()


def test_text_rendering(theories):
    s = ir.emit_text(ir.substitute_zero(action_min(theories["dw"]), ["theta"]))
    assert "⟨χ, d_A⁺ψ⟩" in s
    assert "θ" not in s
    k = ir.emit_text(ir.substitute_zero(action_min(theories["kw"]), ["theta"]))
    assert "χ̃" in k and "⟨χ, d_A⁺ψ⟩" in k


def test_latex_rendering_is_stable(theories):
    e = action_min(theories["dw"])
    assert ir.emit_latex(e) == ir.emit_latex(e)
    assert "\\langle \\chi,(d_{A}\\psi)_+\\rangle" in ir.emit_latex(e)
