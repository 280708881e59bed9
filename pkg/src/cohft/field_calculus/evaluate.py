"""Exact evaluation of expression trees on torus configurations."""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from ..exact_core import ExactScalar, GrassmannElement
from .. import rep_theory as rt
from ..torus_forms import (
    FourierForm, codifferential, exterior_d, hodge_star, inner_density, integrate, interior,
    partial, wedge,
)
from . import ir

E = ExactScalar


class EvaluationError(ValueError):
    """Evaluation failed; ``path`` locates the offending node."""

    def __init__(self, msg, path=()):
        super().__init__(f"{msg} at {'/'.join(path) or '<root>'}")
        self.path = path


@dataclass
class Config:
    """Values of the fields of a theory.

    Grassmann generators 1..budget carry the odd fields; the generators
    above ``budget`` are reserved for dual-number substitutions.
    """

    values: dict
    budget: int
    N: int
    cutoff: int
    seed: int

    def digest(self) -> str:
        h = hashlib.sha256()
        for k in sorted(self.values):
            h.update(k.encode())
            for key in sorted(self.values[k].terms, key=repr):
                h.update(repr((key, str(self.values[k].terms[key]))).encode())
        return h.hexdigest()[:16]

    def to_json(self) -> dict:
        return {"seed": self.seed, "cutoff": self.cutoff, "budget": self.budget, "digest": self.digest()}


def _rand_coef(rng: random.Random, height: int, real: bool) -> ExactScalar:
    def q():
        while True:
            p = rng.randint(-height, height)
            if p:
                return Fraction(p, rng.randint(1, height))
    return E(q(), 0 if real else q())


def _rand_term(T, sym, rng, pool, N, grass, height, dense=False):
    """One random mode; ``dense`` fills every form index set and component."""
    m = T.value_dim(sym.slot)
    freq = rng.choice(pool)
    if dense:
        slots = [(idx, comp) for idx in itertools.combinations(range(4), sym.form) for comp in range(m)]
    else:
        slots = [(tuple(sorted(rng.sample(range(4), sym.form))), rng.randrange(m))]
    real = sym.real and sym.slot != "spin"
    t = FourierForm.zero(4, m, N)
    for idx, comp in slots:
        c = _rand_coef(rng, height, real)
        t = t + FourierForm.mode(freq, idx, comp, c, grass, 4, m, N)
        if real:
            t = t + FourierForm.mode(tuple(-k for k in freq), idx, comp, c.conj(), grass, 4, m, N)
    return t


def _constrain(T, sym, v: FourierForm) -> FourierForm:
    if sym.constraint == "sd":
        return _sd(T, v, 1)
    if sym.constraint == "asd":
        return _sd(T, v, -1)
    if sym.constraint == "spin+":
        return v.map_components(T.module.Proj[1])
    if sym.constraint == "spin-":
        return v.map_components(T.module.Proj[-1])
    return v


def _sd(T, v: FourierForm, sign: int) -> FourierForm:
    s = hodge_star(v)
    return (v + (s if sign > 0 else -s)).scale(E(T.conv.sd_norm))


def frequency_pool(rng: random.Random, cutoff: int, size: int) -> list:
    """{0} ∪ {±p_1, ..., ±p_size} with random non-zero p_i of sup-norm ≤ cutoff."""
    pool = [(0, 0, 0, 0)]
    if cutoff == 0:
        return pool
    while len(pool) < 1 + 2 * size:
        p = tuple(rng.randint(-cutoff, cutoff) for _ in range(4))
        if any(p) and p not in pool:
            pool += [p, tuple(-k for k in p)]
    return pool


def random_config(T, cutoff: int = 2, budget: int = 8, seed: int = 0, even_modes: int = 2,
                  height: int = 7, reserve: int = 2, odd_zero: bool = False, pool_size: int = 2,
                  overrides: dict | None = None) -> Config:
    """Random exact configuration.

    Frequencies are drawn from a per-config pool {0, ±p_1, ±p_2} so that
    products of fields have non-trivial zero modes and torus integrals of
    multilinear expressions are generically non-zero.
    Even fields get ``even_modes`` frequencies, each dense in form indices and
    value components.  Odd fields are
    Σ_i ε_i ⊗ (one random mode) over all generators i = 1..budget, so cubic
    and quartic products of a single odd field are non-zero.  Real fields are
    Hermitian-symmetric in the frequency; spinors are complex and projected to
    their chirality; (anti-)self-dual fields are projected.
    """
    n_odd = len(T.odd_fields)
    if budget < max(n_odd, 1) and not odd_zero:
        raise ValueError(f"Grassmann budget {budget} is smaller than the number of odd fields {n_odd}")
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    rng = random.Random(f"{T.name}:{seed}:{cutoff}:{budget}")
    N = budget + reserve
    pool = frequency_pool(rng, cutoff, pool_size)
    vals = {}
    for sym in T.fields.values():
        m = T.value_dim(sym.slot)
        v = FourierForm.zero(4, m, N)
        if sym.ghost % 2:
            if not odd_zero:
                for i in range(1, budget + 1):
                    v = v + _rand_term(T, sym, rng, pool, N, (i,), height)
        else:
            for _ in range(even_modes):
                v = v + _rand_term(T, sym, rng, pool, N, (), height, dense=True)
        vals[sym.name] = _constrain(T, sym, v)
    if overrides:
        vals.update(overrides)
    return Config(vals, budget, N, cutoff, seed)


class Evaluator:
    """Evaluates trees of one theory on one configuration (memoized)."""

    def __init__(self, T, cfg: Config | dict, N: int | None = None):
        self.T = T
        if isinstance(cfg, Config):
            self.values = cfg.values
            self.N = cfg.N
        else:
            self.values = cfg
            self.N = N if N is not None else next(iter(cfg.values())).N
        self.memo: dict = {}

    def zero_of(self, e: ir.Expr):
        if e.slot == "number":
            return GrassmannElement({}, self.N)
        return FourierForm.zero(4, self.T.value_dim(e.slot), self.N)

    def __call__(self, e: ir.Expr):
        return self.ev(e, ())

    def ev(self, e: ir.Expr, path):
        r = self.memo.get(e)
        if r is not None:
            return r
        try:
            r = self._ev(e, path)
        except EvaluationError:
            raise
        except (ValueError, KeyError, TypeError) as exc:
            raise EvaluationError(f"{type(exc).__name__}: {exc} in node {e.op}", path + (e.op,)) from exc
        self.memo[e] = r
        return r

    def _ev(self, e: ir.Expr, path):
        T = self.T
        g = T.g
        mod = T.module
        cv = T.conv
        op = e.op
        p = path + (op,)
        a = [self.ev(x, p) for x in e.args] if op != "add" else None
        if op == "field":
            return self.values[e.params[0].name]
        if op == "zero":
            return self.zero_of(e)
        if op == "add":
            out = None
            for x in e.args:
                v = self.ev(x, p)
                out = v if out is None else out + v
            return out
        if op == "scale":
            return a[0].scale(e.params[0])
        if op == "bracket":
            return rt.bracket(g, a[0], a[1])
        if op == "act":
            return rt.act(mod, a[0], a[1])
        if op == "inner":
            x, y = e.args
            if x.slot == "ad":
                return inner_density(a[0], a[1], g.pairing_table)
            if x.slot == "spin":
                return inner_density(a[0], a[1], "herm")
            return inner_density(a[0], a[1], "diag")
        if op == "lpair":
            if e.args[0].slot == "ad":
                return rt.lie_pair(g, a[0], a[1])
            return wedge(a[0], a[1])
        if op == "mub":
            return rt.mu_bilinear(mod, a[0], a[1], cv.mu_polarization)
        if op == "mu":
            return rt.mu_bilinear(mod, a[0], a[0], Fraction(1, 2))
        if op == "cliff":
            return rt.gamma_apply(mod, a[0], e.params[0])
        if op == "cliffact":
            return rt.clifford_act(mod, a[0], a[1])
        if op == "dirac":
            return rt.dirac(mod, a[1], a[0])
        if op == "curv":
            return rt.curvature(g, a[0])
        if op == "covd":
            if e.args[1].slot == "spin":
                return rt.cov_d_spinor(mod, a[0], a[1])
            return rt.cov_d(g, a[0], a[1])
        if op == "covcod":
            out = codifferential(a[1]).scale(cv.codiff_sign)
            return out + self._codlin(a[0], a[1])
        if op == "codlin":
            return self._codlin(a[0], a[1])
        if op == "sd":
            s = hodge_star(a[0])
            return (a[0] + (s if e.params[0] > 0 else -s)).scale(E(cv.sd_norm))
        if op == "csd":
            s = hodge_star(a[0].conj())
            return (a[0] + (s if e.params[0] > 0 else -s)).scale(E(cv.sd_norm))
        if op == "star":
            return hodge_star(a[0])
        if op == "d":
            return exterior_d(a[0])
        if op == "interior":
            return interior(a[0], e.params[0])
        if op == "partial":
            return partial(a[0], e.params[0])
        if op == "dxw":
            return rt.dx_wedge(e.params[0], a[0])
        if op == "re":
            return a[0].real_part()
        if op == "im":
            return a[0].imag_part()
        if op == "conj":
            return a[0].conj()
        if op == "integrate":
            return integrate(a[0], strict=False)
        raise EvaluationError(f"no evaluation rule for node {op}", p)

    def _codlin(self, X, a):
        out = FourierForm.zero(4, self.T.g.dim, self.N)
        for m in range(4):
            Xm = interior(X, m)
            if Xm.is_zero():
                continue
            out = out - interior(rt.bracket(self.T.g, Xm, a), m)
        return out


def evaluate(T, e: ir.Expr, cfg: Config):
    return Evaluator(T, cfg)(e)


def is_zero_value(v) -> bool:
    return v.is_zero()


def tau_coefficient(v, t: int):
    """Left derivative ∂/∂ε_t of a value that is at most linear in ε_t."""
    bit = 1 << (t - 1)
    if isinstance(v, GrassmannElement):
        return v.left_derivative(t)
    out = {}
    for (f, fm, gm, c), x in v.terms.items():
        if gm & bit:
            below = bin(gm & (bit - 1)).count("1")
            out[(f, fm, gm ^ bit, c)] = -x if below % 2 else x
    return v._new(out)


def first_nonzero_monomial(v):
    """A short description of one non-zero term (for counterexamples)."""
    if isinstance(v, GrassmannElement):
        for k, c in v.terms.items():
            return {"grassmann": list(k), "coeff": str(c)}
        return None
    for (f, fm, gm, c), x in v.terms.items():
        from ..torus_forms import decode_freq
        return {"freq": list(decode_freq(f, v.n)), "form": [i for i in range(4) if fm >> i & 1],
                "grassmann": [i + 1 for i in range(v.N) if gm >> i & 1], "component": c, "coeff": str(x)}
    return None
