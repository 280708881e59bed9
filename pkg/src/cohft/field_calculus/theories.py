"""Builtin theories: field tables, Q rules, K rules and the data of ℱ.

Every rule is transcribed with its displayed signs.  Notation:

* ``x·Φ`` in Q rules is ``act``: ρ(x)σ on spinors and [x, ·] on ad fields.
* d_A^+ψ is ``sd(+1, covd(A, ψ))``; D̸_A is ``dirac``; ψσ is ``cliffact``.
* The K table is stated at the level of forms.  Its component derivations
  K_ν (ghost -1, form 0) are recovered by K_νX = P_X(ι_ν KX)/(f_X + 1),
  with P_X the (anti-)self-dual projection for constrained X, so that
  K = Σ_ν dx^ν∧K_ν reproduces KX whenever the projection is trivial.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from ..rep_theory import CliffordModule, LieAlgebraData, lie_algebra, so3_monopole_module, sw_module
from . import ir
from .ir import (
    FieldSymbol, act, add, bracket, cliff, cliffact, covcod, covd, curv, dirac, dxw,
    interior, mu, mub, neg, scale, sd, sum_of,
)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Conventions:
    """Convention toggles exposed to the audit.

    clifford_sign:   γ_μγ_ν + γ_νγ_μ = 2·clifford_sign·δ_{μν}
    mu_polarization: μ(σ, υ) = polarization·(μ(σ+υ) - μ(σ) - μ(υ))
    codiff_sign:     sign in front of d^* inside d_A^*
    sd_norm:         α_± = sd_norm·(α ± ⋆α)
    """

    clifford_sign: int = -1
    mu_polarization: Fraction = HALF
    codiff_sign: int = 1
    sd_norm: Fraction = HALF

    def to_json(self) -> dict:
        return {"clifford_sign": self.clifford_sign, "mu_polarization": str(self.mu_polarization),
                "codiff_sign": self.codiff_sign, "sd_norm": str(self.sd_norm)}


DEFAULT_CONVENTIONS = Conventions()


@dataclass
class Theory:
    name: str
    g: LieAlgebraData
    module: CliffordModule | None
    conv: Conventions
    fields: dict
    Q: dict = dc_field(default_factory=dict)
    K: dict = dc_field(default_factory=dict)
    # (χ-type, b-type, F component, LinF component) per equation of ℱ
    equations: list = dc_field(default_factory=list)
    Phi: tuple = ()
    Psi: tuple = ()
    description: str = ""
    # component K rules given directly (name -> ν -> tree), overriding the lift
    K_components: dict = dc_field(default_factory=dict)

    def f(self, name: str) -> ir.Expr:
        return ir.field(self.fields[name])

    def __getitem__(self, name: str) -> ir.Expr:
        return self.f(name)

    @property
    def odd_fields(self) -> list:
        return [s for s in self.fields.values() if s.ghost % 2]

    def value_dim(self, slot: str) -> int:
        if slot == "ad":
            return self.g.dim
        if slot == "spin":
            return self.module.dim
        return 1

    def rule_bidegree_report(self) -> list:
        """Fields whose Q or K image has the wrong bidegree."""
        bad = []
        for n, e in self.Q.items():
            s = self.fields[n]
            if (e.ghost, e.form, e.slot) != (s.ghost + 1, s.form, s.slot):
                bad.append(("Q", n))
        for n, e in self.K.items():
            s = self.fields[n]
            if (e.ghost, e.form, e.slot) != (s.ghost - 1, s.form + 1, s.slot):
                bad.append(("K", n))
        return bad

    # x·Φ as used in Q rules, and the standard gauge-fermion action
    def theta_action(self, x: ir.Expr, X: ir.Expr) -> ir.Expr:
        return act(x, X)

    def gauge_action(self, x: ir.Expr) -> list:
        """xΦ = (d_A x, -xσ, ...): the infinitesimal gauge action on Φ."""
        out = []
        for n in self.Phi:
            X = self.f(n)
            if n == "A":
                out.append(covd(self.f("A"), x))
            else:
                out.append(neg(act(x, X)))
        return out

    def psi_action(self, x: ir.Expr) -> list:
        """xΨ = ([ψ, x], -xυ, ...): the same action on the tangent fields."""
        out = []
        for n in self.Psi:
            X = self.f(n)
            if self.fields[n].slot == "ad":
                out.append(bracket(X, x))
            else:
                out.append(neg(act(x, X)))
        return out

    def phi_action_q(self, x: ir.Expr) -> list:
        """φΦ as it appears in QΨ = -θΨ + φΦ: (-d_Aφ, φσ, ...)."""
        out = []
        for n in self.Phi:
            X = self.f(n)
            if n == "A":
                out.append(neg(covd(self.f("A"), x)))
            else:
                out.append(act(x, X))
        return out


def _sym(name, ghost, form, slot, constraint=None, latex="", real=True):
    return FieldSymbol(name, ghost, form, slot, constraint, real, latex)


def _common_fields() -> list:
    return [
        _sym("theta", 1, 0, "ad", latex="\\theta"),
        _sym("phi", 2, 0, "ad", latex="\\phi"),
        _sym("A", 0, 1, "ad", latex="A"),
        _sym("psi", 1, 1, "ad", latex="\\psi"),
        _sym("chi", -1, 2, "ad", "sd", latex="\\chi"),
        _sym("b", 0, 2, "ad", "sd", latex="b"),
        _sym("eta", -1, 0, "ad", latex="\\eta"),
        _sym("lambda", -2, 0, "ad", latex="\\lambda"),
    ]


def _spinor_fields() -> list:
    return [
        _sym("sigma", 0, 0, "spin", "spin+", latex="\\sigma", real=False),
        _sym("upsilon", 1, 0, "spin", "spin+", latex="\\upsilon", real=False),
        _sym("xi", -1, 0, "spin", "spin-", latex="\\xi", real=False),
        _sym("h", 0, 0, "spin", "spin-", latex="h", real=False),
    ]


def _kw_fields() -> list:
    return [
        _sym("sigma", 0, 1, "ad", latex="\\sigma"),
        _sym("psit", 1, 1, "ad", latex="\\widetilde{\\psi}"),
        _sym("chit", -1, 2, "ad", "asd", latex="\\widetilde{\\chi}"),
        _sym("bt", 0, 2, "ad", "asd", latex="\\widetilde{b}"),
        _sym("etat", -1, 0, "ad", latex="\\widetilde{\\eta}"),
        _sym("w", 0, 0, "ad", latex="w"),
    ]


def _order(fs):
    return {s.name: s for s in fs}


def _common_q(T: Theory) -> dict:
    th, ph, A, ps, lam, eta = (T.f(n) for n in ("theta", "phi", "A", "psi", "lambda", "eta"))
    return {
        "theta": add(ph, scale(-HALF, bracket(th, th))),
        "phi": neg(bracket(th, ph)),
        "A": add(ps, covd(A, th)),
        "psi": add(neg(bracket(th, ps)), neg(covd(A, ph))),
        "lambda": add(eta, neg(bracket(th, lam))),
        "eta": add(neg(bracket(th, eta)), bracket(ph, lam)),
    }


def _k_component_dx(T: Theory, fn) -> ir.Expr:
    return sum_of(dxw(m, fn(m)) for m in range(4))


# ---------------------------------------------------------------------------
# Donaldson-Witten


def dw(g: str | LieAlgebraData = "su2", conv: Conventions = DEFAULT_CONVENTIONS) -> Theory:
    g = lie_algebra(g) if isinstance(g, str) else g
    T = Theory("dw", g, None, conv, _order(_common_fields()), Phi=("A",), Psi=("psi",),
               description="twisted pure N=2 super Yang-Mills (Donaldson-Witten)")
    th, ph, A, ps, chi, b = (T.f(n) for n in ("theta", "phi", "A", "psi", "chi", "b"))
    F = curv(A)
    T.Q = _common_q(T)
    T.Q["chi"] = add(b, neg(bracket(th, chi)), sd(1, F))
    T.Q["b"] = add(neg(bracket(th, b)), bracket(ph, chi), neg(sd(1, covd(A, ps))))
    T.equations = [("chi", "b", sd(1, F), sd(1, covd(A, ps)))]
    T.K = {
        "theta": A,
        "phi": neg(ps),
        "A": scale(2, chi),
        "psi": add(scale(2, F), scale(-2, b), scale(-2, sd(1, F))),
        "chi": ir.zero(-2, 3, "ad"),
        "b": scale(3, covd(A, chi)),
    }
    return T


# ---------------------------------------------------------------------------
# generalized Seiberg-Witten (SW for u(1), SO(3) monopoles for su(2))


def _gsw(name: str, g: LieAlgebraData, module: CliffordModule, conv: Conventions, desc: str) -> Theory:
    T = Theory(name, g, module, conv, _order(_common_fields()[:6] + _spinor_fields() + _common_fields()[6:]),
               Phi=("A", "sigma"), Psi=("psi", "upsilon"), description=desc)
    th, ph, A, ps, chi, b = (T.f(n) for n in ("theta", "phi", "A", "psi", "chi", "b"))
    sg, up, xi, h = (T.f(n) for n in ("sigma", "upsilon", "xi", "h"))
    F = curv(A)
    T.Q = _common_q(T)
    T.Q.update({
        "sigma": add(up, neg(act(th, sg))),
        "upsilon": add(neg(act(th, up)), act(ph, sg)),
        "chi": add(b, neg(bracket(th, chi)), sd(1, F), scale(-HALF, mu(sg))),
        "b": add(neg(bracket(th, b)), bracket(ph, chi), neg(sd(1, covd(A, ps))), mub(sg, up)),
        "xi": add(h, neg(act(th, xi)), dirac(A, sg)),
        "h": add(neg(act(th, h)), act(ph, xi), neg(dirac(A, up)), neg(cliffact(ps, sg))),
    })
    T.equations = [
        ("chi", "b", add(sd(1, F), scale(-HALF, mu(sg))), add(sd(1, covd(A, ps)), neg(mub(sg, up)))),
        ("xi", "h", dirac(A, sg), add(dirac(A, up), cliffact(ps, sg))),
    ]
    T.K = {
        "theta": A,
        "phi": neg(ps),
        "A": scale(2, chi),
        "psi": add(scale(2, F), scale(-2, b), mu(sg), scale(-2, sd(1, F))),
        "sigma": neg(_k_component_dx(T, lambda m: cliff(m, xi))),
        "upsilon": _k_component_dx(T, lambda m: cliff(m, h)),
        "chi": ir.zero(-2, 3, "ad"),
        "b": add(scale(3, covd(A, chi)), neg(_k_component_dx(T, lambda m: mub(cliff(m, xi), sg)))),
        "xi": ir.zero(-2, 1, "spin"),
        "h": neg(_k_component_dx(T, lambda m: sum_of(
            act(interior(n, interior(m, chi)), cliff(n, sg)) for n in range(4)))),
    }
    # K_μ b = (D_μ χ)_+ - μ(e_μ ξ, σ) with D_μ = ι_μ d_A, as used when K_μ is
    # applied to the gauge fermion; for σ = 0 it equals the lift of 3d_Aχ.
    T.K_components = {"b": lambda m: add(sd(1, interior(m, covd(A, chi))), neg(mub(cliff(m, xi), sg)))}
    return T


def sw_u1(conv: Conventions = DEFAULT_CONVENTIONS) -> Theory:
    return _gsw("sw_u1", lie_algebra("u1"), sw_module(conv.clifford_sign), conv,
                "Seiberg-Witten theory, G = U(1), S = C^4 with charge one")


def gsw_so3(conv: Conventions = DEFAULT_CONVENTIONS) -> Theory:
    mod = so3_monopole_module(conv.clifford_sign)
    return _gsw("gsw_so3", mod.g, mod, conv, "SO(3)-monopole theory, S = C^4 ⊗ C^2")


# ---------------------------------------------------------------------------
# Kapustin-Witten


def kw(g: str | LieAlgebraData = "su2", conv: Conventions = DEFAULT_CONVENTIONS) -> Theory:
    g = lie_algebra(g) if isinstance(g, str) else g
    T = Theory("kw", g, None, conv, _order(_common_fields()[:6] + _kw_fields() + _common_fields()[6:]),
               Phi=("A", "sigma"), Psi=("psi", "psit"),
               description="twisted pure N=4 super Yang-Mills (Kapustin-Witten)")
    th, ph, A, ps, chi, b = (T.f(n) for n in ("theta", "phi", "A", "psi", "chi", "b"))
    sg, pst, cht, bt, et, w = (T.f(n) for n in ("sigma", "psit", "chit", "bt", "etat", "w"))
    F = curv(A)
    T.Q = _common_q(T)
    T.Q.update({
        "sigma": add(pst, neg(bracket(th, sg))),
        "psit": add(neg(bracket(th, pst)), bracket(ph, sg)),
        "chi": add(b, neg(bracket(th, chi)), sd(1, add(F, scale(-HALF, bracket(sg, sg))))),
        "b": add(neg(bracket(th, b)), bracket(ph, chi), neg(sd(1, covd(A, ps))),
                 sd(1, bracket(sg, pst))),
        "chit": add(bt, neg(bracket(th, cht)), sd(-1, covd(A, sg))),
        "bt": add(neg(bracket(th, bt)), bracket(ph, cht), neg(sd(-1, covd(A, pst))),
                  neg(sd(-1, bracket(ps, sg)))),
        "etat": add(w, neg(bracket(th, et)), covcod(A, sg)),
        "w": add(neg(bracket(th, w)), bracket(ph, et), neg(covcod(A, pst)), _contract(ps, sg)),
    })
    T.equations = [
        ("chi", "b", sd(1, add(F, scale(-HALF, bracket(sg, sg)))),
         add(sd(1, covd(A, ps)), neg(sd(1, bracket(sg, pst))))),
        ("chit", "bt", sd(-1, covd(A, sg)), add(sd(-1, covd(A, pst)), sd(-1, bracket(ps, sg)))),
        ("etat", "w", covcod(A, sg), add(covcod(A, pst), neg(_contract(ps, sg)))),
    ]
    return T


def _contract(a: ir.Expr, b: ir.Expr) -> ir.Expr:
    """⟨[a, b]⟩ := Σ_μ [ι_μ a, ι_μ b] for ad-valued 1-forms."""
    return sum_of(bracket(interior(m, a), interior(m, b)) for m in range(4))


BUILTINS = {"dw": dw, "sw_u1": sw_u1, "kw": kw, "gsw_so3": gsw_so3}
ALIASES = {"gsw": "gsw_so3", "sw": "sw_u1"}


def builtin_theory(name: str, conv: Conventions = DEFAULT_CONVENTIONS) -> Theory:
    key = ALIASES.get(name, name)
    if key not in BUILTINS:
        raise KeyError(f"unknown theory {name!r}; choose from {sorted(BUILTINS)}")
    return BUILTINS[key](conv=conv)


def with_conventions(T: Theory, conv: Conventions) -> Theory:
    return builtin_theory(T.name, conv)
