"""Graded derivations on expression trees.

A :class:`TreeDerivation` has ghost degree ``gd`` and form degree 0, so it
commutes with d, ι, ⋆, dx∧ and the projections, and passes an argument of
ghost degree g with sign (-1)^{gd·g}.  Leaf images come from a rule table.

Two independent routes compute D(e) at a configuration:

* symbolic: :meth:`TreeDerivation.apply` builds the tree D(e) by the
  linearization rule of every node, which is then evaluated;
* dual numbers: e is evaluated at X + τ·(DX) with a reserved Grassmann
  generator τ, and the τ-coefficient is extracted (:func:`dual_apply`).
"""

from __future__ import annotations

from fractions import Fraction

from . import ir
from .ir import Expr
from .evaluate import Config, Evaluator, tau_coefficient
from ..exact_core import GrassmannElement


class UndeclaredRule(KeyError):
    """No leaf rule or linearization rule is declared."""


class TreeDerivation:
    def __init__(self, name: str, ghost: int, rules: dict, fields: dict):
        self.name = name
        self.gd = ghost
        self.rules = rules
        self.fields = fields
        self.memo: dict = {}

    def sign(self, g: int) -> int:
        return -1 if (self.gd * g) % 2 else 1

    def apply(self, e: Expr) -> Expr:
        r = self.memo.get(e)
        if r is None:
            r = self._apply(e)
            if (r.ghost, r.form, r.slot) != (e.ghost + self.gd, e.form, e.slot) and r.op != "zero":
                raise ir.BidegreeError(f"{self.name} image of {e!r} has bidegree {(r.ghost, r.form)}")
            self.memo[e] = r
        return r

    def _apply(self, e: Expr) -> Expr:
        op, A = e.op, e.args
        D = self.apply
        if op == "field":
            name = e.params[0].name
            if name not in self.rules:
                raise UndeclaredRule(f"{self.name} has no rule for field {name!r}")
            return self.rules[name]
        if op == "zero":
            return ir.zero(e.ghost + self.gd, e.form, e.slot)
        if op == "add":
            return ir.add(*[D(x) for x in A])
        if op in ir.LINEAR_UNARY:
            return ir.rebuild(e, [D(A[0])])
        if op in ir.MULTILINEAR:
            parts = []
            acc = 0
            for i, x in enumerate(A):
                new = list(A)
                new[i] = D(x)
                t = ir.rebuild(e, new)
                parts.append(ir.scale(self.sign(acc), t))
                acc += x.ghost
            return ir.add(*parts) if parts else ir.zero(e.ghost + self.gd, e.form, e.slot)
        if op == "mu":
            s = A[0]
            Ds = D(s)
            return ir.add(ir.mub(Ds, s), ir.scale(self.sign(s.ghost), ir.mub(s, Ds)))
        if op == "curv":
            return ir.covd(A[0], D(A[0]))
        if op == "covd":
            return ir.add(ir.covd(A[0], D(A[1])), ir.act(D(A[0]), A[1]))
        if op == "covcod":
            return ir.add(ir.covcod(A[0], D(A[1])), ir.codlin(D(A[0]), A[1]))
        if op == "dirac":
            return ir.add(ir.dirac(A[0], D(A[1])), ir.cliffact(D(A[0]), A[1]))
        raise UndeclaredRule(f"no linearization rule for node {op!r}")


def q_derivation(T, rules: dict | None = None, name: str = "Q") -> TreeDerivation:
    return TreeDerivation(name, 1, dict(T.Q if rules is None else rules), T.fields)


def k_component_rules(T, nu: int) -> dict:
    """K_ν X = P_X(ι_ν KX)/(f_X + 1)."""
    out = {}
    for n, KX in T.K.items():
        s = T.fields[n]
        c = ir.interior(nu, KX)
        if s.constraint == "sd":
            c = ir.sd(1, c)
        elif s.constraint == "asd":
            c = ir.sd(-1, c)
        out[n] = ir.scale(Fraction(1, s.form + 1), c)
    for n, fn in T.K_components.items():
        out[n] = fn(nu)
    return out


def k_components(T) -> list:
    if not T.K:
        raise UndeclaredRule(f"theory {T.name} has no K rules")
    return [TreeDerivation(f"K{nu}", -1, k_component_rules(T, nu), T.fields) for nu in range(4)]


def apply_K(Ks: list, e: Expr) -> Expr:
    """Form-level K e = Σ_ν dx^ν∧K_ν e."""
    return ir.sum_of((ir.dxw(nu, Ks[nu].apply(e)) for nu in range(4)),
                     like=ir.zero(e.ghost - 1, min(e.form + 1, 4), e.slot))


def apply_derivation(T, D: str, e: Expr) -> Expr:
    """Q, K or d applied to a tree."""
    if D == "Q":
        return q_derivation(T).apply(e)
    if D == "K":
        return apply_K(k_components(T), e)
    if D == "d":
        if e.slot == "number":
            return ir.zero(e.ghost, 0, "number")
        return ir.d(e)
    raise ValueError(f"unknown derivation {D!r}")


def commutator_qk(Q: TreeDerivation, Knu: TreeDerivation, e: Expr) -> Expr:
    """[Q, K_ν] e = Q K_ν e + K_ν Q e (both odd)."""
    return ir.add(Q.apply(Knu.apply(e)), Knu.apply(Q.apply(e)))


def dual_apply(T, rules: dict, e: Expr, cfg: Config, tau: int | None = None, ev: Evaluator | None = None):
    """Value of D(e) at cfg via e(X + τ·DX), for an odd derivation D.

    ``rules`` maps field names to image trees; fields without a rule are
    left unshifted only if e does not contain them.
    """
    tau = cfg.budget + 1 if tau is None else tau
    if tau > cfg.N:
        raise ValueError("no reserved Grassmann generator for the dual-number route")
    ev = ev or Evaluator(T, cfg)
    t = GrassmannElement.generator(tau, cfg.N)
    shifted = {}
    needed = e.leaves()
    for n, v in cfg.values.items():
        if n in needed:
            if n not in rules:
                raise KeyError(f"no rule for field {n!r}")
            dv = ev(rules[n])
            shifted[n] = v + dv.grassmann_mul(t, left=True)
        else:
            shifted[n] = v
    val = Evaluator(T, shifted, cfg.N)(e)
    return tau_coefficient(val, tau)
