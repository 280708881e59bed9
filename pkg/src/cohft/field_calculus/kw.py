"""Complexified Kapustin-Witten fields and the U(1) family of equations."""

from __future__ import annotations

import copy
from fractions import Fraction

from ..exact_core import ExactScalar
from . import ir
from .ir import add, bracket, covcod, covd, csd, neg, scale, sd, sum_of
from .actions import action_standard
from .derivation import TreeDerivation, q_derivation
from .evaluate import Evaluator, random_config
from .theories import Theory, kw

I = ExactScalar(0, 1)
HALF = Fraction(1, 2)


def _c(x, y):
    """x + i y."""
    return add(x, scale(I, y))


def complex_fields(T: Theory) -> dict:
    f = T.f
    return {
        "A_c": _c(f("A"), f("sigma")),
        "psi_c": _c(f("psi"), f("psit")),
        "chi_c": _c(f("chi"), f("chit")),
        "eta_c": _c(f("eta"), f("etat")),
        "b_c": _c(f("b"), f("bt")),
        "w_c": add(scale(I, f("w")), bracket(f("phi"), f("lambda"))),
    }


def im_codiff(Ac: ir.Expr, X: ir.Expr, reading: str = "stated") -> ir.Expr:
    """Im(d*_{A_c} X): ``stated`` is d*_{A_c}(Im X); ``literal`` is Im(d*_{A_c} X)."""
    if reading == "stated":
        return covcod(Ac, ir.im(X))
    if reading == "literal":
        return ir.im(covcod(Ac, X))
    raise ValueError(f"unknown reading {reading!r}")


def simplified_rules(T: Theory, reading: str = "stated") -> dict:
    """The simplified Q table in complex variables, as (lhs, rhs) trees."""
    c = complex_fields(T)
    th, ph, lam = T.f("theta"), T.f("phi"), T.f("lambda")
    Ac, psic, chic, etac, bc, wc = (c[k] for k in ("A_c", "psi_c", "chi_c", "eta_c", "b_c", "w_c"))
    Fc = ir.curv(Ac)
    return {
        "A_c": (Ac, add(psic, covd(Ac, th))),
        "psi_c": (psic, add(neg(bracket(th, psic)), neg(covd(Ac, ph)))),
        "chi_c": (chic, add(bc, neg(bracket(th, chic)), csd(1, Fc))),
        "b_c": (bc, add(neg(bracket(th, bc)), bracket(ph, chic), neg(csd(1, covd(Ac, psic))))),
        "eta_c": (etac, add(wc, neg(bracket(th, etac)), scale(I, im_codiff(Ac, Ac, reading)))),
        "w_c": (wc, add(neg(bracket(th, wc)), bracket(ph, etac), neg(scale(I, im_codiff(Ac, psic, reading))))),
        "lambda": (lam, add(ir.re(etac), neg(bracket(th, lam)))),
    }


def kw_complexify(T: Theory | None = None, trials: int = 3, seed: int = 0, cutoff: int = 2,
                  budget: int = 8, reading: str = "stated") -> dict:
    """Check every simplified complex Q rule against the real-field rules.

    Also checks F_{A_c} = F_A - ½[σ,σ] + i d_Aσ, the complex self-duality of
    χ_c and b_c, and Im(d*_{A_c}A_c) = d*_Aσ.
    """
    T = T or kw()
    Q = q_derivation(T)
    c = complex_fields(T)
    A, sg = T.f("A"), T.f("sigma")
    ids = {f"Q {k}": add(Q.apply(lhs), neg(rhs)) for k, (lhs, rhs) in simplified_rules(T, reading).items()}
    ids["F_{A_c} = F_A - 1/2[sigma,sigma] + i d_A sigma"] = add(
        ir.curv(c["A_c"]), neg(sum_of([ir.curv(A), scale(-HALF, bracket(sg, sg)), scale(I, covd(A, sg))])))
    ids["(chi_c)_- = 0"] = csd(-1, c["chi_c"])
    ids["(b_c)_- = 0"] = csd(-1, c["b_c"])
    ids["Im(d*_{A_c} A_c) = d*_A sigma"] = add(im_codiff(c["A_c"], c["A_c"], reading), neg(covcod(A, sg)))
    res = {k: True for k in ids}
    for t in range(trials):
        ev = Evaluator(T, random_config(T, cutoff, budget, seed + t))
        for k, e in ids.items():
            if res[k] and not ev(e).is_zero():
                res[k] = False
    return res


# ---------------------------------------------------------------------------
# U(1) family


def _check_circle(cs):
    co, si = (Fraction(x) for x in cs)
    if co * co + si * si != 1:
        raise ValueError(f"({co}, {si}) is not on the unit circle")
    return co, si


def family_equations(T: Theory, cs) -> list:
    """The three displayed real equations of g𝓕_μ = 0 at e^{iφ} = cos + i sin."""
    co, si = _check_circle(cs)
    A, sg = T.f("A"), T.f("sigma")
    Fp = add(ir.curv(A), scale(-HALF, bracket(sg, sg)))
    dsg = covd(A, sg)
    return [sd(1, add(scale(co, Fp), scale(-si, dsg))), sd(-1, add(scale(si, Fp), scale(co, dsg))), covcod(A, sg)]


def family_theory(cs, T: Theory | None = None) -> Theory:
    """KW with 𝓕_μ replaced by g𝓕_μ; Qb-type rules use Lin(g𝓕_μ) by linearization."""
    T0 = T or kw()
    co, si = _check_circle(cs)
    T = copy.copy(T0)
    T.name = f"kw_family({co},{si})"
    T.Q = dict(T0.Q)
    th, ph = T.f("theta"), T.f("phi")
    lin = TreeDerivation("Lin", 1, {"A": T.f("psi"), "sigma": T.f("psit")}, T.fields)
    eqs = []
    for (cn, bn, _, _), E in zip(T0.equations, family_equations(T0, (co, si))):
        L = lin.apply(E)
        C, B = T.f(cn), T.f(bn)
        T.Q[cn] = add(B, neg(bracket(th, C)), E)
        T.Q[bn] = add(neg(bracket(th, B)), bracket(ph, C), neg(L))
        eqs.append((cn, bn, E, L))
    T.equations = eqs
    return T


ROTATED = (("psi", "psit"), ("chi", "chit"), ("b", "bt"), ("eta", "etat"))


def rotate_values(values: dict, cs) -> dict:
    """g acts by e^{iφ} on ψ_c, χ_c, b_c, η_c and fixes the other fields.

    The rotated real parts leave the (anti-)self-dual subspaces; they are
    used as they are, without re-projection.
    """
    co, si = (ExactScalar(Fraction(x)) for x in _check_circle(cs))
    out = dict(values)
    for x, y in ROTATED:
        X, Y = values[x], values[y]
        out[x] = X.scale(co) - Y.scale(si)
        out[y] = X.scale(si) + Y.scale(co)
    return out


def kw_family(cs, T: Theory | None = None, trials: int = 3, seed: int = 0, cutoff: int = 2,
              budget: int = 8) -> dict:
    """Report for the family at (cos, sin).

    equations:  (e^{iφ}F_{A_c})_+ = E_1 + i E_2 with the displayed E_1, E_2
    nilpotency: Q² = 0 for the family theory on every field
    action:     g*S̃_{𝓕_μ} = S̃_{g𝓕_μ} (standard actions, s = 1)
    """
    T0 = T or kw()
    co, si = _check_circle(cs)
    Tf = family_theory((co, si), T0)
    E1, E2, _ = family_equations(T0, (co, si))
    Ac = complex_fields(T0)["A_c"]
    eq = add(csd(1, scale(ExactScalar(co, si), ir.curv(Ac))), neg(_c(E1, E2)))
    Qf = q_derivation(Tf)
    q2 = {n: Qf.apply(r) for n, r in Tf.Q.items()}
    S0 = action_standard(T0)
    Sg = action_standard(Tf)
    res = {"equations": True, "nilpotency": True, "action": True}
    for t in range(trials):
        cfg = random_config(T0, cutoff, budget, seed + t)
        ev = Evaluator(T0, cfg)
        evf = Evaluator(Tf, cfg)
        if not ev(eq).is_zero():
            res["equations"] = False
        if any(not evf(e).is_zero() for e in q2.values()):
            res["nilpotency"] = False
        pulled = Evaluator(T0, rotate_values(cfg.values, (co, si)), cfg.N)(S0)
        if not (pulled - evf(Sg)).is_zero():
            res["action"] = False
    res["angle"] = [str(co), str(si)]
    return res
