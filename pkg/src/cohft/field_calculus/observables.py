"""Descent observables, exp(K) expansions and the holomorphic-anomaly identity.

Mixed-degree quantities (𝔸, 𝔽, θ_K, φ_K, O) are kept as lists indexed by
form degree, since a tree has a single bidegree.  Tr is c·⟨·,·⟩ with the
invariant pairing; ``tr_scale`` sets c.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from . import ir
from .ir import add, bracket, inner, integrate, lpair, neg, scale, sd, sum_of
from .derivation import apply_K, k_components, q_derivation
from .evaluate import Evaluator, random_config
from .theories import Theory, dw

HALF = Fraction(1, 2)


def _tr(c, x, y):
    return scale(c, lpair(x, y))


def _graded_square(parts: list, c) -> list:
    """Components of Tr(X∧X) for X = Σ_p X^(p)."""
    out = [[] for _ in range(5)]
    for i, x in enumerate(parts):
        for j, y in enumerate(parts):
            if x is None or y is None or i + j > 4 or x.op == "zero" or y.op == "zero":
                continue
            out[i + j].append(_tr(c, x, y))
    return [sum_of(o) if o else ir.zero(4 - k, k, "scalar") for k, o in enumerate(out)]


# ---------------------------------------------------------------------------
# descent


def descent_components(T: Theory | None = None, tr_scale=1, F_sign: int = 1, psi_sign: int = -1):
    """(𝔸, 𝔽, O) with 𝔸 = θ + A, 𝔽 = φ + psi_sign·ψ + F_sign·F_A, O = Tr(𝔽∧𝔽)."""
    T = T or dw()
    th, ph, A, ps = T.f("theta"), T.f("phi"), T.f("A"), T.f("psi")
    AA = [th, A]
    FF = [ph, scale(psi_sign, ps), scale(F_sign, ir.curv(A))]
    O = _graded_square(FF, tr_scale)
    return AA, FF, O


def total_differential(T: Theory, parts: list, Q=None) -> list:
    """Components of (d + (-1)^•Q) applied to Σ_p parts[p]."""
    Q = Q or q_derivation(T)
    n = len(parts)
    out = []
    for p in range(n + 1):
        terms = []
        if p >= 1 and p - 1 < n and parts[p - 1].form < 4:
            terms.append(ir.d(parts[p - 1]))
        if p < n:
            qp = Q.apply(parts[p])
            terms.append(qp if p % 2 == 0 else neg(qp))
        terms = [t for t in terms if t.op != "zero"]
        out.append(sum_of(terms) if terms else None)
    return out


def descent_observable(T: Theory | None = None, trials: int = 3, seed: int = 0, cutoff: int = 2,
                       budget: int = 8, tr_scale=1, F_sign: int = 1, psi_sign: int = -1) -> dict:
    """O = Tr(𝔽(φ)²) and its closedness report (evaluated identities)."""
    T = T or dw()
    Q = q_derivation(T)
    AA, FF, O = descent_components(T, tr_scale, F_sign, psi_sign)
    ids = {"Q O^(0) = 0": O[0] and Q.apply(O[0])}
    for p in range(1, 5):
        ids[f"Q O^({p}) = d O^({p - 1})"] = add(Q.apply(O[p]), neg(ir.d(O[p - 1])))
    for p, t in enumerate(total_differential(T, O, Q)):
        if t is not None:
            ids[f"(d + (-1)^deg Q) O, degree {p}"] = t
    # 𝔽 = D𝔸 + ½[𝔸, 𝔸] componentwise
    DA = total_differential(T, AA, Q)
    for p in range(3):
        half = [bracket(AA[i], AA[p - i]) for i in range(2) if 0 <= p - i < 2]
        rhs = add(DA[p], scale(HALF, sum_of(half))) if half else DA[p]
        ids[f"F^({p}) = (DA + 1/2[A,A])^({p})"] = add(rhs, neg(FF[p]))
    results = {name: True for name in ids}
    for k in range(trials):
        cfg = random_config(T, cutoff, budget, seed + k)
        ev = Evaluator(T, cfg)
        for name, e in ids.items():
            if results[name] and e is not None and not ev(e).is_zero():
                results[name] = False
    return {"O": O, "identities": results}


# ---------------------------------------------------------------------------
# exp(K)


def exp_K(T: Theory, X: ir.Expr, Ks=None) -> list:
    """[K^p X / p!]_p by iterated form-level K; components normalized."""
    Ks = Ks or k_components(T)
    out = [X]
    cur = X
    for p in range(1, 5):
        cur = ir.normalize(apply_K(Ks, cur))
        if cur.op == "zero":
            out.append(cur)
            continue
        out.append(cur)
    return [ir.normalize(scale(Fraction(1, factorial(p)), x)) if x.op != "zero" else x
            for p, x in enumerate(out)]


def phi_K_closed_form(T: Theory) -> list:
    """φ - ψ + (b - (F_A)_-) + d_Aχ + ½[χ, χ] by form degree."""
    ph, ps, b, A, chi = (T.f(n) for n in ("phi", "psi", "b", "A", "chi"))
    return [ph, neg(ps), add(b, neg(sd(-1, ir.curv(A)))), ir.covd(A, chi), scale(HALF, bracket(chi, chi))]


def theta_K_expansion(T: Theory | None = None, trials: int = 3, seed: int = 0) -> dict:
    T = T or dw()
    Ks = k_components(T)
    th, A, chi = T.f("theta"), T.f("A"), T.f("chi")
    thK = exp_K(T, th, Ks)
    phK = exp_K(T, T.f("phi"), Ks)
    expected_theta = [th, A, chi, None, None]
    structural = all(
        (x.op == "zero") if e is None else ir.structurally_equal(x, e) for x, e in zip(thK, expected_theta))
    closed = phi_K_closed_form(T)
    ok_phi = [True] * 5
    for k in range(trials):
        ev = Evaluator(T, random_config(T, 2, 8, seed + k))
        for p in range(5):
            if ok_phi[p] and not (ev(phK[p]) - ev(closed[p])).is_zero():
                ok_phi[p] = False
    K5 = ir.normalize(apply_K(Ks, thK[4])) if thK[4].op != "zero" else thK[4]
    return {"theta_K": thK, "phi_K": phK, "theta_K_structural": structural,
            "phi_K_components": ok_phi, "phi_K_matches": all(ok_phi), "K5_theta_zero": K5.op == "zero"}


# ---------------------------------------------------------------------------
# holomorphic-anomaly identity


def tr_phiK_sq_top(T: Theory, tr_scale, phK=None) -> ir.Expr:
    phK = phK or exp_K(T, T.f("phi"))
    return integrate(_graded_square(phK, tr_scale)[4])


def hol_identity(T: Theory | None = None, trials: int = 3, seed: int = 0, tr_scale=1) -> dict:
    """S̃_min minus the exp(K) trace term, against its displayed values.

    With X = ½∫(exp(K)Tr φ²)^top the checks are (exact evaluation):
      exp_trace:        X = ∫Tr(φ_K²)^top
      display:          X = ∫Tr(½φ[χ,χ] - ψ∧d_Aχ + ½b∧b + ½F_-∧F_-)
      intermediate:     S̃_min - X = ∫(½|F_-|² + ½|b|² + ⟨b, F_+⟩)vol
      intermediate_even: the same with the odd fields set to zero
      residual:         S̃_min - X - (intermediate RHS) = ½∫Tr(φ[χ,χ])
      hol:              S̃_min - X = ½∫Tr(F∧F) at b = -(F_A)_+
      hol_even_density: the even part of that, as densities (no integration),
                        against +½Tr(F∧F) and against -½Tr(F∧F)
    ∫Tr(F∧F) vanishes for every connection on the trivial torus bundle, so
    only the density check sees the sign of the right-hand side.
    """
    from .actions import action_min, odd_zero_config_overrides
    T = T or dw()
    c = tr_scale
    A, phi, psi, chi, b = (T.f(n) for n in ("A", "phi", "psi", "chi", "b"))
    F = ir.curv(A)
    Fm, Fp = sd(-1, F), sd(1, F)
    phK = exp_K(T, phi)
    trK = tr_phiK_sq_top(T, c, phK)
    X = integrate(scale(HALF * Fraction(c), exp_K(T, lpair(phi, phi))[4]))
    display = integrate(sum_of([
        _tr(c, phi, scale(HALF, bracket(chi, chi))), neg(_tr(c, psi, ir.covd(A, chi))),
        _tr(c, scale(HALF, b), b), _tr(c, scale(HALF, Fm), Fm)]))
    diff = add(action_min(T), neg(X))
    inter_density = sum_of([scale(HALF, inner(Fm, Fm)), scale(HALF, inner(b, b)), inner(b, Fp)])
    inter = integrate(inter_density)
    residual = integrate(scale(HALF, _tr(c, phi, bracket(chi, chi))))
    tff = scale(HALF, _tr(c, F, F))
    # even part of S̃_min - X as a density, read off the displays
    even_density = add(sum_of([inner(b, b), inner(Fp, b)]),
                       neg(sum_of([_tr(c, scale(HALF, b), b), _tr(c, scale(HALF, Fm), Fm)])))
    res = {k: True for k in ("exp_trace", "display", "intermediate", "intermediate_even", "residual", "hol",
                             "hol_even_density_plus", "hol_even_density_minus")}
    for k in range(trials):
        cfg = random_config(T, 2, 8, seed + k)
        ev = Evaluator(T, cfg)
        vX = ev(X)
        checks = {
            "exp_trace": vX - ev(trK),
            "display": vX - ev(display),
            "intermediate": ev(diff) - ev(inter),
            "residual": ev(diff) - ev(inter) - ev(residual),
        }
        even = dict(cfg.values)
        even.update(odd_zero_config_overrides(T, cfg))
        ev0 = Evaluator(T, even, cfg.N)
        checks["intermediate_even"] = ev0(diff) - ev0(inter)
        sub = dict(cfg.values)
        sub["b"] = -ev(Fp)
        ev2 = Evaluator(T, sub, cfg.N)
        checks["hol"] = ev2(diff) - ev2(integrate(tff))
        sub0 = dict(even)
        sub0["b"] = -ev0(Fp)
        ev3 = Evaluator(T, sub0, cfg.N)
        checks["hol_even_density_plus"] = ev3(even_density) - ev3(tff)
        checks["hol_even_density_minus"] = ev3(even_density) + ev3(tff)
        for name, v in checks.items():
            if not v.is_zero():
                res[name] = False
    res["tr_scale"] = str(c)
    return res


# ---------------------------------------------------------------------------
# vector supersymmetry


def vector_susy_check(T: Theory | None = None, trials: int = 3, seed: int = 0, cutoff: int = 2,
                      budget: int = 8) -> dict:
    """Per-field [Q, K_ν]X = ∂_νX and form-level [Q, K]X = dX, plus K_ν on S̃_min.

    Torus integrals replace the compact-support argument: ∫∂_ν(·) = 0.
    ``consistency`` checks K_ν S̃_min = ∫∂_ν G - Q K_ν G for the gauge
    fermion G, which holds whenever [Q, K_ν] = ∂_ν on the fields of G.
    """
    from .actions import action_min, gauge_fermion_min
    from .derivation import commutator_qk
    T = T or dw()
    Q = q_derivation(T)
    Ks = k_components(T)
    comm = {n: [add(commutator_qk(Q, Ks[nu], T.f(n)), neg(ir.partial(nu, T.f(n)))) for nu in range(4)]
            for n in T.K}
    form = {n: add(sum_of([ir.dxw(nu, commutator_qk(Q, Ks[nu], T.f(n))) for nu in range(4)]),
                   neg(ir.d(T.f(n)))) for n in T.K}
    G = gauge_fermion_min(T)
    S = action_min(T)
    KS = [Ks[nu].apply(S) for nu in range(4)]
    KG = [Ks[nu].apply(G) for nu in range(4)]
    cons = [add(KS[nu], Q.apply(KG[nu])) for nu in range(4)]
    fields = {n: {"components": [True] * 4, "form_level": True} for n in T.K}
    agg = {"K_S_min": [True] * 4, "K_gauge_fermion": [True] * 4, "consistency": [True] * 4}
    for k in range(trials):
        ev = Evaluator(T, random_config(T, cutoff, budget, seed + k))
        for n in T.K:
            r = fields[n]
            r["components"] = [ok and ev(e).is_zero() for ok, e in zip(r["components"], comm[n])]
            r["form_level"] = r["form_level"] and ev(form[n]).is_zero()
        for key, es in (("K_S_min", KS), ("K_gauge_fermion", KG), ("consistency", cons)):
            agg[key] = [ok and ev(e).is_zero() for ok, e in zip(agg[key], es)]
    failing = sorted(n for n, r in fields.items() if not (all(r["components"]) and r["form_level"]))
    return {
        "theory": T.name, "fields": fields, "failing_fields": failing,
        "no_K_rule": sorted(n for n in T.fields if n not in T.K),
        **{k: all(v) for k, v in agg.items()}, "per_direction": agg,
    }
