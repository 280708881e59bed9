"""Randomized exact identity testing: suites, reports, counterexamples.

An identity is a tree (or a value function) that must evaluate to exactly
zero on every sampled configuration.  Nothing is approximated: a non-zero
Gaussian-rational Grassmann coefficient anywhere is a failure.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import __version__
from .field_calculus import ir
from .field_calculus.evaluate import (
    Config, EvaluationError, Evaluator, first_nonzero_monomial, random_config,
)
from .field_calculus.theories import Theory, builtin_theory

__all__ = ["Identity", "SuiteSpec", "Report", "random_config", "check_zero", "run_suite", "SUITES",
           "suite_identities", "applicable"]

DEFAULT_TRIALS = 20
DEFAULT_CUTOFF = 2
DEFAULT_BUDGET = 8

# operations whose value depends on the metric (Hodge star, pairings, Clifford data)
METRIC_OPS = frozenset({"star", "sd", "csd", "covcod", "codlin", "inner", "mub", "mu", "cliff", "cliffact",
                        "dirac", "interior", "partial"})
ALGEBRAIC = "metric-independent (algebraic)"
FLAT = "uses flat ⋆"


@dataclass
class Identity:
    """``expr`` (or ``value(T, cfg, ev)``) must vanish; ``even`` samples odd fields as 0."""

    name: str
    expr: ir.Expr | None = None
    value: Callable | None = None
    even: bool = False

    @property
    def metric(self) -> str:
        """Value functions are labeled conservatively as metric dependent."""
        if self.expr is None:
            return FLAT
        return FLAT if any(x.op in METRIC_OPS for x in self.expr.walk()) else ALGEBRAIC

    def evaluate(self, T: Theory, cfg: Config, ev: Evaluator):
        if self.expr is not None:
            return ev(self.expr)
        return self.value(T, cfg, ev)


@dataclass
class SuiteSpec:
    suite: str
    theory: str
    trials: int = DEFAULT_TRIALS
    cutoff: int = DEFAULT_CUTOFF
    budget: int = DEFAULT_BUDGET
    seed: int = 0
    identities: list | None = None
    conventions: object = None


@dataclass
class Report:
    suite: str
    theory: str
    identities: list
    seed: int
    conventions: dict
    duration_ms: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r["status"] == "pass" for r in self.identities)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_json(self, timing: bool = True) -> dict:
        out = {"suite": self.suite, "theory": self.theory, "identities": self.identities, "seed": self.seed,
               "conventions": self.conventions}
        if self.extra:
            out.update(self.extra)
        out["digest"] = hashlib.sha256(json.dumps(out, sort_keys=True).encode()).hexdigest()[:16]
        out["duration_ms"] = self.duration_ms if timing else None
        return out

    def text(self) -> str:
        lines = [f"{self.suite} [{self.theory}] seed={self.seed}"]
        for r in self.identities:
            line = f"  {r['status'].upper():4} {r['name']} ({r['trials']} trials)"
            if r["status"] != "pass" and r.get("counterexample"):
                line += f"  counterexample: {json.dumps(r['counterexample'], sort_keys=True)}"
            lines.append(line)
        lines.append(f"  {'all pass' if self.passed else 'FAILURES'}")
        return "\n".join(lines)


def _configs(T: Theory, trials: int, cutoff: int, budget: int, seed: int, even: bool):
    for k in range(trials):
        yield random_config(T, cutoff, budget, seed + k, odd_zero=even)


def _counterexample(cfg: Config, v) -> dict:
    return {**cfg.to_json(), "monomial": first_nonzero_monomial(v)}


def _minimize(T: Theory, ident: Identity, seed: int, attempts: int = 8):
    """Best effort: the failure reproduced on constant fields and few generators."""
    budget = max(2, len(T.odd_fields))
    for k in range(attempts):
        cfg = random_config(T, 0, budget, seed + k, odd_zero=ident.even)
        try:
            v = ident.evaluate(T, cfg, Evaluator(T, cfg))
        except EvaluationError:
            return None
        if not v.is_zero():
            return _counterexample(cfg, v)
    return None


def check_zero(e, T: Theory, trials: int = DEFAULT_TRIALS, cutoff: int = DEFAULT_CUTOFF,
               budget: int = DEFAULT_BUDGET, seed: int = 0, name: str | None = None, even: bool = False,
               minimize: bool = True) -> dict:
    """Evaluate e on ``trials`` configs; pass iff every value is exactly 0."""
    ident = e if isinstance(e, Identity) else Identity(name or ir.to_prefix(e), expr=e, even=even)
    n = 0
    for cfg in _configs(T, trials, cutoff, budget, seed, ident.even):
        n += 1
        v = ident.evaluate(T, cfg, Evaluator(T, cfg))
        if not v.is_zero():
            out = {"name": ident.name, "status": "fail", "trials": n, "metric": ident.metric,
                   "counterexample": _counterexample(cfg, v)}
            if minimize:
                small = _minimize(T, ident, cfg.seed)
                if small is not None:
                    out["minimized"] = small
            return out
    return {"name": ident.name, "status": "pass", "trials": n, "metric": ident.metric}


# ---------------------------------------------------------------------------
# suites


def _nilpotency(T: Theory) -> list:
    from .field_calculus.derivation import dual_apply, q_derivation
    Q = q_derivation(T)
    out = []
    for n in T.fields:
        out.append(Identity(f"Q^2 {n} (tree)", expr=Q.apply(Q.apply(T.f(n)))))
        out.append(Identity(f"Q^2 {n} (dual number)",
                            value=lambda T_, cfg, ev, n=n: dual_apply(T_, T_.Q, T_.Q[n], cfg, ev=ev)))
    return out


def _diff(a, b):
    return ir.add(a, ir.neg(b))


def _action(T: Theory) -> list:
    from .field_calculus import actions as ac
    s = Fraction(2, 3)
    Smin, S = ac.action_min(T), ac.action_standard(T)
    out = [
        Identity("action_min = general minimal expansion", expr=_diff(Smin, ac.golden_min_general(T))),
        Identity("action_min = displayed minimal action", expr=_diff(Smin, ac.golden_min_display(T))),
        Identity("action_standard(1) = general standard expansion", expr=_diff(S, ac.golden_standard_general(T))),
        Identity("action_standard(2/3) = general standard expansion",
                 expr=_diff(ac.action_standard(T, s), ac.golden_standard_general(T, s))),
        Identity("action_standard(1) = displayed standard action", expr=_diff(S, ac.golden_standard_display(T))),
        Identity("bosonic part of action_standard = even expansion", expr=_diff(S, ac.golden_even(T)), even=True),
    ]
    lhs, rhs = ac.first_order_identity(T)
    out.append(Identity("first-order identity |b|^2 + <F,b> = |b + F/2|^2 - |F|^2/4", expr=_diff(lhs, rhs)))
    return out


def _vector_susy(T: Theory) -> list:
    from .field_calculus.actions import action_min, gauge_fermion_min
    from .field_calculus.derivation import commutator_qk, k_components, q_derivation
    Q = q_derivation(T)
    Ks = k_components(T)
    out = []
    for n in T.K:
        X = T.f(n)
        out.append(Identity(f"[Q,K_nu] {n} = d_nu {n}", expr=ir.sum_of(
            [ir.dxw(nu, _diff(commutator_qk(Q, Ks[nu], X), ir.partial(nu, X))) for nu in range(4)])))
        out.append(Identity(f"[Q,K] {n} = d {n}", expr=_diff(
            ir.sum_of([ir.dxw(nu, commutator_qk(Q, Ks[nu], X)) for nu in range(4)]), ir.d(X))))
    S, G = action_min(T), gauge_fermion_min(T)
    for nu in range(4):
        out.append(Identity(f"K_{nu} S_min = 0", expr=Ks[nu].apply(S)))
    for nu in range(4):
        out.append(Identity(f"K_{nu} gauge fermion = 0", expr=Ks[nu].apply(G)))
    return out


def _descent(T: Theory) -> list:
    from .field_calculus import observables as ob
    from .field_calculus.actions import action_min
    from .field_calculus.derivation import apply_K, k_components, q_derivation
    Q = q_derivation(T)
    AA, FF, O = ob.descent_components(T)
    out = [Identity("Q O^(0) = 0", expr=Q.apply(O[0]))]
    for p in range(1, 5):
        out.append(Identity(f"Q O^({p}) = d O^({p - 1})", expr=_diff(Q.apply(O[p]), ir.d(O[p - 1]))))
    for p, t in enumerate(ob.total_differential(T, O, Q)):
        if t is not None:
            out.append(Identity(f"(d + (-1)^deg Q) O, form degree {p}", expr=t))
    DA = ob.total_differential(T, AA, Q)
    for p in range(3):
        half = [ir.bracket(AA[i], AA[p - i]) for i in range(2) if 0 <= p - i < 2]
        rhs = ir.add(DA[p], ir.scale(Fraction(1, 2), ir.sum_of(half))) if half else DA[p]
        out.append(Identity(f"F^({p}) = ((d + (-1)^deg Q)A + [A,A]/2)^({p})", expr=_diff(rhs, FF[p])))
    # exp(K) expansions
    Ks = k_components(T)
    phK = ob.exp_K(T, T.f("phi"), Ks)
    closed = ob.phi_K_closed_form(T)
    for p in range(5):
        out.append(Identity(f"phi_K^({p}) = closed form", expr=_diff(phK[p], closed[p])))
    thK = ob.exp_K(T, T.f("theta"), Ks)
    out.append(Identity("K^5 theta = 0", expr=ir.normalize(apply_K(Ks, thK[4]))))
    # holomorphic-anomaly chain, Tr = invariant pairing
    c = 1
    A, phi, psi, chi, b = (T.f(n) for n in ("A", "phi", "psi", "chi", "b"))
    F = ir.curv(A)
    Fm, Fp = ir.sd(-1, F), ir.sd(1, F)
    half = Fraction(1, 2)
    X = ir.integrate(ir.scale(half, ob.exp_K(T, ir.lpair(phi, phi), Ks)[4]))
    trK = ob.tr_phiK_sq_top(T, c, phK)
    diff = _diff(action_min(T), trK)
    inter = ir.integrate(ir.sum_of([ir.scale(half, ir.inner(Fm, Fm)), ir.scale(half, ir.inner(b, b)),
                                    ir.inner(b, Fp)]))
    tff = ir.integrate(ir.scale(half, ir.lpair(F, F)))
    out.append(Identity("1/2 int (exp(K) Tr phi^2)^top = int Tr(phi_K^2)^top", expr=_diff(X, trK)))
    out.append(Identity("S_min - int Tr(phi_K^2)^top = int(|F-|^2/2 + |b|^2/2 + <b,F+>)", expr=_diff(diff, inter)))

    def anomaly(T_, cfg, ev):
        sub = dict(cfg.values)
        sub["b"] = -ev(Fp)
        e2 = Evaluator(T_, sub, cfg.N)
        return e2(diff) - e2(tff)
    out.append(Identity("anomaly: at b = -F+, S_min - int Tr(phi_K^2)^top = 1/2 int Tr(F^F)", value=anomaly))
    return out


def _kw(T: Theory) -> list:
    from .field_calculus import kw as K
    out = []
    c = K.complex_fields(T)
    for k, (lhs, rhs) in K.simplified_rules(T).items():
        out.append(Identity(f"simplified Q {k}", expr=_diff(q_apply(T, lhs), rhs)))
    A, sg = T.f("A"), T.f("sigma")
    half = Fraction(1, 2)
    out.append(Identity("F_{A_c} = F_A - [sigma,sigma]/2 + i d_A sigma", expr=_diff(ir.curv(c["A_c"]), ir.sum_of(
        [ir.curv(A), ir.scale(-half, ir.bracket(sg, sg)), ir.scale(K.I, ir.covd(A, sg))]))))
    out.append(Identity("(chi_c)_- = 0", expr=ir.csd(-1, c["chi_c"])))
    out.append(Identity("(b_c)_- = 0", expr=ir.csd(-1, c["b_c"])))
    for cs in ((1, 0), (0, 1), (Fraction(3, 5), Fraction(4, 5))):
        out += _kw_family_identities(T, cs)
    return out


def q_apply(T: Theory, e: ir.Expr) -> ir.Expr:
    from .field_calculus.derivation import q_derivation
    return q_derivation(T).apply(e)


def _kw_family_identities(T: Theory, cs) -> list:
    from .field_calculus import kw as K
    from .field_calculus.actions import action_standard
    from .field_calculus.derivation import q_derivation
    co, si = (Fraction(x) for x in cs)
    tag = f"({co},{si})"
    Tf = K.family_theory((co, si), T)
    E1, E2, _ = K.family_equations(T, (co, si))
    eq = _diff(ir.csd(1, ir.scale(K.ExactScalar(co, si), ir.curv(K.complex_fields(T)["A_c"]))), K._c(E1, E2))
    Qf = q_derivation(Tf)
    S0, Sg = action_standard(T), action_standard(Tf)

    def nil(T_, cfg, ev):
        evf = Evaluator(Tf, cfg)
        return sum((evf(Qf.apply(r)) for r in Tf.Q.values() if r.form == 2),
                   evf(Qf.apply(Tf.Q["w"])))

    def action(T_, cfg, ev):
        pulled = Evaluator(T, K.rotate_values(cfg.values, (co, si)), cfg.N)(S0)
        return pulled - Evaluator(Tf, cfg)(Sg)
    return [
        Identity(f"family {tag}: (e^(i phi) F_Ac)_+ = E1 + i E2", expr=eq),
        Identity(f"family {tag}: Q^2 = 0 on the rotated equation fields", value=nil),
        Identity(f"family {tag}: g* S_F = S_gF", value=action),
    ]


def _brst(T: Theory) -> list:
    from .field_calculus import actions as ac
    Qb = ac.brst_derivation(T)
    SB = ac.brst_action(T)
    out = [Identity("S_BRST = int |F|^2 vol", expr=_diff(SB, ac.classical_action(T)), even=True),
           Identity("Q_BRST^2 theta = 0", expr=Qb.apply(Qb.apply(T.f("theta"))))]
    for n in ac.brst_rules(T):
        if n != "theta":
            out.append(Identity(f"Q_BRST^2 {n} = 0", expr=Qb.apply(Qb.apply(T.f(n)))))
    return out


SUITES = {
    "nilpotency": (_nilpotency, None),
    "action": (_action, None),
    "vector-susy": (_vector_susy, {"dw", "sw_u1", "gsw_so3"}),
    "descent": (_descent, {"dw"}),
    "kw": (_kw, {"kw"}),
    "brst": (_brst, None),
}


def applicable(suite: str, theory: str) -> bool:
    only = SUITES[suite][1]
    return only is None or theory in only


def suite_identities(suite: str, T: Theory) -> list:
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; choose from {sorted(SUITES)} or 'all'")
    if not applicable(suite, T.name):
        raise ValueError(f"suite {suite!r} does not apply to theory {T.name!r}")
    return SUITES[suite][0](T)


def run_suite(s: SuiteSpec) -> Report:
    from .field_calculus.theories import DEFAULT_CONVENTIONS
    conv = s.conventions or DEFAULT_CONVENTIONS
    T = builtin_theory(s.theory, conv)
    t0 = time.perf_counter()
    idents = s.identities if s.identities is not None else suite_identities(s.suite, T)
    results = []
    for ident in idents:
        try:
            results.append(check_zero(ident, T, s.trials, s.cutoff, s.budget, s.seed))
        except EvaluationError as exc:
            results.append({"name": ident.name, "status": "error", "trials": 0, "error": str(exc)})
    return Report(s.suite, T.name, results, s.seed, conv.to_json(),
                  int(1000 * (time.perf_counter() - t0)),
                  {"trials": s.trials, "cutoff": s.cutoff, "budget": s.budget, "version": __version__})
