"""Action functionals, golden expansions, the first-order identity and BRST."""

from __future__ import annotations

from fractions import Fraction

from . import ir
from .ir import act, add, bracket, covd, inner, integrate, neg, scale, sd, sum_of
from .derivation import TreeDerivation, q_derivation
from .theories import Theory

HALF = Fraction(1, 2)


def _sq(x):
    return inner(x, x)


def _int(xs) -> ir.Expr:
    return integrate(sum_of(xs))


def gauge_fermion_min(T: Theory) -> ir.Expr:
    """∫⟨χ, b⟩vol summed over the equations of ℱ."""
    return _int(inner(T.f(c), T.f(b)) for c, b, _, _ in T.equations)


def gauge_fermion_standard(T: Theory, s=1) -> ir.Expr:
    """∫(⟨χ, b⟩ + ⟨Ψ, λΦ⟩ + s⟨η, [φ, λ]⟩)vol."""
    lam, eta, phi = T.f("lambda"), T.f("eta"), T.f("phi")
    parts = [inner(T.f(c), T.f(b)) for c, b, _, _ in T.equations]
    parts += [inner(T.f(p), x) for p, x in zip(T.Psi, T.gauge_action(lam))]
    parts.append(scale(s, inner(eta, bracket(phi, lam))))
    return _int(parts)


def action_min(T: Theory) -> ir.Expr:
    return q_derivation(T).apply(gauge_fermion_min(T))


def action_standard(T: Theory, s=1) -> ir.Expr:
    return q_derivation(T).apply(gauge_fermion_standard(T, s))


# ---------------------------------------------------------------------------
# golden expansions


def golden_min_general(T: Theory) -> ir.Expr:
    """∫(|b|² + ⟨ℱ, b⟩ + ⟨χ, Lin ℱ Ψ⟩ - ⟨χ, φχ⟩)vol."""
    phi = T.f("phi")
    out = []
    for c, b, F, L in T.equations:
        C, B = T.f(c), T.f(b)
        out += [_sq(B), inner(F, B), inner(C, L), neg(inner(C, act(phi, C)))]
    return _int(out)


def golden_standard_general(T: Theory, s=1) -> ir.Expr:
    """S̃_min + ⟨φΦ, λΦ⟩ + s|[φ,λ]|² - ⟨Ψ, ηΦ⟩ - ⟨Ψ, λΨ⟩ - s⟨η, [φ, η]⟩."""
    phi, lam, eta = T.f("phi"), T.f("lambda"), T.f("eta")
    out = [golden_min_general(T).args[0]]
    out += [inner(x, y) for x, y in zip(T.phi_action_q(phi), T.gauge_action(lam))]
    out.append(scale(s, _sq(bracket(phi, lam))))
    out += [neg(inner(T.f(p), x)) for p, x in zip(T.Psi, T.gauge_action(eta))]
    out += [neg(inner(T.f(p), x)) for p, x in zip(T.Psi, T.psi_action(lam))]
    out.append(scale(-s, inner(eta, bracket(phi, eta))))
    return _int(out)


def golden_even(T: Theory) -> ir.Expr:
    """S_fo + ∫(⟨φΦ, λΦ⟩ + |[φ, λ]|²)vol: the bosonic part."""
    phi, lam = T.f("phi"), T.f("lambda")
    out = []
    for c, b, F, L in T.equations:
        B = T.f(b)
        out += [_sq(B), inner(F, B)]
    out += [inner(x, y) for x, y in zip(T.phi_action_q(phi), T.gauge_action(lam))]
    out.append(_sq(bracket(phi, lam)))
    return _int(out)


def golden_min_display(T: Theory) -> ir.Expr:
    """The minimal action as displayed for the theory (general form if none)."""
    if T.name not in ("gsw_so3", "sw_u1"):
        return golden_min_general(T)
    f = T.f
    A, phi, psi, chi, b = f("A"), f("phi"), f("psi"), f("chi"), f("b")
    sg, up, xi, h = f("sigma"), f("upsilon"), f("xi"), f("h")
    F = ir.curv(A)
    return _int([
        _sq(b), inner(add(sd(1, F), scale(-HALF, ir.mu(sg))), b), _sq(h), inner(ir.dirac(A, sg), h),
        inner(chi, add(sd(1, covd(A, psi)), neg(ir.mub(sg, up)))),
        inner(xi, add(ir.dirac(A, up), ir.cliffact(psi, sg))),
        neg(inner(chi, bracket(phi, chi))), neg(inner(xi, act(phi, xi))),
    ])


def golden_standard_display(T: Theory) -> ir.Expr:
    """The standard action (s = 1) exactly as displayed for the theory."""
    f = T.f
    A, phi, psi, chi, b, lam, eta = (f(n) for n in ("A", "phi", "psi", "chi", "b", "lambda", "eta"))
    F = ir.curv(A)
    dA = lambda x: covd(A, x)  # noqa: E731
    if T.name == "dw":
        return _int([
            _sq(b), inner(sd(1, F), b), neg(inner(dA(phi), dA(lam))), _sq(bracket(phi, lam)),
            inner(chi, sd(1, dA(psi))), neg(inner(chi, bracket(phi, chi))), inner(psi, bracket(lam, psi)),
            neg(inner(psi, dA(eta))), neg(inner(eta, bracket(phi, eta))),
        ])
    if T.name in ("gsw_so3", "sw_u1"):
        sg, up, xi, h = f("sigma"), f("upsilon"), f("xi"), f("h")
        return _int([
            _sq(b), inner(add(sd(1, F), scale(-HALF, ir.mu(sg))), b), _sq(h), inner(ir.dirac(A, sg), h),
            neg(inner(dA(phi), dA(lam))), neg(inner(act(phi, sg), act(lam, sg))), _sq(bracket(phi, lam)),
            inner(chi, sd(1, dA(psi))), inner(xi, ir.dirac(A, up)), neg(inner(psi, dA(eta))),
            inner(up, act(eta, sg)), neg(inner(chi, ir.mub(sg, up))), inner(xi, ir.cliffact(psi, sg)),
            neg(inner(chi, bracket(phi, chi))), neg(inner(xi, act(phi, xi))), inner(psi, bracket(lam, psi)),
            inner(up, act(lam, up)), neg(inner(eta, bracket(phi, eta))),
        ])
    if T.name == "kw":
        return add(golden_kw_even(T), golden_kw_odd(T))
    raise KeyError(T.name)


def golden_kw_even(T: Theory) -> ir.Expr:
    f = T.f
    A, phi, b, lam, sg, bt, w = (f(n) for n in ("A", "phi", "b", "lambda", "sigma", "bt", "w"))
    F = ir.curv(A)
    return _int([
        _sq(b), inner(sd(1, add(F, scale(-HALF, bracket(sg, sg)))), b), _sq(bt), inner(sd(-1, covd(A, sg)), bt),
        _sq(w), inner(ir.covcod(A, sg), w), neg(inner(covd(A, phi), covd(A, lam))),
        neg(inner(bracket(phi, sg), bracket(lam, sg))), _sq(bracket(phi, lam)),
    ])


def golden_kw_odd(T: Theory) -> ir.Expr:
    f = T.f
    A, phi, psi, chi, lam, eta = (f(n) for n in ("A", "phi", "psi", "chi", "lambda", "eta"))
    sg, pst, cht, et = (f(n) for n in ("sigma", "psit", "chit", "etat"))
    dA = lambda x: covd(A, x)  # noqa: E731
    return _int([
        inner(chi, sd(1, dA(psi))), inner(cht, sd(-1, dA(pst))), neg(inner(pst, dA(et))), neg(inner(psi, dA(eta))),
        neg(inner(chi, sd(1, bracket(sg, pst)))), inner(cht, sd(-1, bracket(sg, psi))),
        inner(psi, bracket(sg, et)), neg(inner(pst, bracket(sg, eta))),
        neg(inner(chi, bracket(phi, chi))), neg(inner(cht, bracket(phi, cht))), neg(inner(et, bracket(phi, et))),
        neg(inner(eta, bracket(phi, eta))), inner(psi, bracket(lam, psi)), inner(pst, bracket(lam, pst)),
    ])


def odd_zero_config_overrides(T: Theory, cfg) -> dict:
    """Values with every odd field set to zero (for bosonic restrictions)."""
    from ..torus_forms import FourierForm
    return {s.name: FourierForm.zero(4, T.value_dim(s.slot), cfg.N) for s in T.odd_fields}


# ---------------------------------------------------------------------------
# first-order formulation


def first_order_identity(T: Theory | None = None):
    """(lhs, rhs) trees for |b|² + ⟨ℱ, b⟩ = |b + ℱ/2|² - ¼|ℱ|², per equation."""
    from .theories import dw
    T = T or dw()
    lhs, rhs = [], []
    for c, b, F, L in T.equations:
        B = T.f(b)
        lhs += [_sq(B), inner(F, B)]
        shifted = add(B, scale(HALF, F))
        rhs += [_sq(shifted), scale(Fraction(-1, 4), _sq(F))]
    return _int(lhs), _int(rhs)


# ---------------------------------------------------------------------------
# BRST


def brst_rules(T: Theory) -> dict:
    """Q_BRST θ = -½[θ,θ], Q_BRST Φ = θΦ, Q_BRST χ = ℱ(Φ) + θχ.

    Here θ acts by the infinitesimal gauge action (d_A θ, -θσ, -[θ, ·]), the
    same action written λΦ in the standard gauge fermion.
    """
    th = T.f("theta")
    rules = {"theta": scale(-HALF, bracket(th, th))}
    for n, x in zip(T.Phi, T.gauge_action(th)):
        rules[n] = x
    for c, b, F, L in T.equations:
        rules[c] = add(F, neg(act(th, T.f(c))))
    return rules


def brst_derivation(T: Theory) -> TreeDerivation:
    return TreeDerivation("Q_BRST", 1, brst_rules(T), T.fields)


def brst_action(T: Theory) -> ir.Expr:
    Q = brst_derivation(T)
    return Q.apply(_int(inner(T.f(c), F) for c, b, F, L in T.equations))


def classical_action(T: Theory) -> ir.Expr:
    """S = ∫|ℱ|²vol."""
    return _int(_sq(F) for c, b, F, L in T.equations)
