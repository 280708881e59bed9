"""Finite models of equivariant de Rham theory.

Free graded-commutative algebras with exact coefficients, derivations given by
generator images, the Weil algebra, the Kalkman differential on W(g) ⊗ A, the
Chevalley-Eilenberg differential of the dg Lie algebra g[1] ⊕ g acting on a
module algebra, the Mathai-Quillen automorphism and the Chern-Weil morphism.

Every algebra here is a truncated free algebra: monomials whose total degree
in even generators of positive degree exceeds the truncation raise
:class:`TruncationError` rather than being dropped.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

from .exact_core import ExactScalar
from .rep_theory import LieAlgebraData, lie_algebra

E = ExactScalar
ZERO = E(0)
ONE = E(1)


class TruncationError(ArithmeticError):
    pass


class Gen(NamedTuple):
    name: str
    deg: int

    @property
    def parity(self) -> int:
        return self.deg % 2


class FreeGCA:
    """Free graded-commutative algebra on named generators of integer degree."""

    def __init__(self, gens: Sequence[Gen], truncation: int = 4):
        self.gens = tuple(Gen(*g) for g in gens)
        names = [g.name for g in self.gens]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        self.index = {g.name: i for i, g in enumerate(self.gens)}
        self.truncation = truncation
        self.odd = tuple(g.parity == 1 for g in self.gens)
        self.poly = tuple(g.parity == 0 and g.deg != 0 for g in self.gens)
        self._mul_cache: dict = {}

    @property
    def ngens(self) -> int:
        return len(self.gens)

    def one(self) -> "Element":
        return Element(self, {(0,) * self.ngens: ONE})

    def zero(self) -> "Element":
        return Element(self, {})

    def gen(self, name_or_index) -> "Element":
        i = self.index[name_or_index] if isinstance(name_or_index, str) else name_or_index
        e = [0] * self.ngens
        e[i] = 1
        return Element(self, {tuple(e): ONE})

    def __getitem__(self, name) -> "Element":
        return self.gen(name)

    def scalar(self, c) -> "Element":
        return self.one().scale(c)

    def degree(self, mono: tuple) -> int:
        return sum(e * g.deg for e, g in zip(mono, self.gens))

    def mono_mul(self, a: tuple, b: tuple):
        key = (a, b)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        sign = 1
        inv = 0
        for i, eb in enumerate(b):
            if eb and self.odd[i]:
                if a[i]:
                    self._mul_cache[key] = (0, None)
                    return 0, None
                for j in range(i + 1, self.ngens):
                    if a[j] and self.odd[j]:
                        inv += 1
        if inv & 1:
            sign = -1
        m = tuple(x + y for x, y in zip(a, b))
        if sum(e for e, p in zip(m, self.poly) if p) > self.truncation:
            raise TruncationError(f"polynomial degree exceeds truncation {self.truncation}")
        self._mul_cache[key] = (sign, m)
        return sign, m

    def tensor(self, other: "FreeGCA", truncation: int | None = None) -> "FreeGCA":
        return FreeGCA(self.gens + other.gens, self.truncation if truncation is None else truncation)

    def embed(self, x: "Element", target: "FreeGCA") -> "Element":
        """Map an element into a bigger algebra containing these generators by name."""
        idx = [target.index[g.name] for g in self.gens]
        out = {}
        for m, c in x.terms.items():
            e = [0] * target.ngens
            for i, k in enumerate(m):
                e[idx[i]] = k
            out[tuple(e)] = c
        return Element(target, out)

    def random_element(self, rng: random.Random, nterms: int = 4, max_deg: int = 2,
                       height: int = 7) -> "Element":
        """Random element with small monomials (for oracle tests)."""
        out = self.zero()
        for _ in range(nterms):
            x = self.scalar(E(Fraction(rng.randint(-height, height), rng.randint(1, height))))
            for _ in range(rng.randint(0, max_deg)):
                x = x * self.gen(rng.randrange(self.ngens))
            out = out + x
        return out


class Element:
    __slots__ = ("alg", "terms")

    def __init__(self, alg: FreeGCA, terms: dict):
        self.alg = alg
        self.terms = {k: v for k, v in terms.items() if v}

    def _new(self, terms):
        e = object.__new__(Element)
        e.alg = self.alg
        e.terms = terms
        return e

    def __add__(self, o: "Element") -> "Element":
        if not isinstance(o, Element):
            o = self.alg.scalar(o)
        t = dict(self.terms)
        for k, v in o.terms.items():
            s = t[k] + v if k in t else v
            if s:
                t[k] = s
            else:
                t.pop(k, None)
        return self._new(t)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def scale(self, c) -> "Element":
        c = E.coerce(c)
        if not c:
            return self._new({})
        return self._new({k: v * c for k, v in self.terms.items()})

    def __mul__(self, o):
        if not isinstance(o, Element):
            return self.scale(o)
        out: dict = {}
        mm = self.alg.mono_mul
        for ka, va in self.terms.items():
            for kb, vb in o.terms.items():
                s, m = mm(ka, kb)
                if not s:
                    continue
                v = va * vb
                if s < 0:
                    v = -v
                if m in out:
                    v = out[m] + v
                    if v:
                        out[m] = v
                    else:
                        del out[m]
                else:
                    out[m] = v
        return self._new(out)

    def __rmul__(self, c):
        return self.scale(c)

    def one(self) -> "Element":
        return self.alg.one()

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, o):
        if not isinstance(o, Element):
            return NotImplemented
        return (self - o).is_zero()

    __hash__ = None

    def degrees(self) -> set:
        return {self.alg.degree(m) for m in self.terms}

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            mono = "·".join(
                (g.name if e == 1 else f"{g.name}^{e}") for g, e in zip(self.alg.gens, m) if e) or "1"
            parts.append(f"({self.terms[m]}){mono}")
        return " + ".join(parts)


def factors(alg: FreeGCA, mono: tuple) -> list:
    out = []
    for i, e in enumerate(mono):
        out.extend([i] * e)
    return out


# ---------------------------------------------------------------------------
# derivations


@dataclass
class DerivationSpec:
    """Graded derivation of a FreeGCA determined by its values on generators."""

    alg: FreeGCA
    degree: int
    images: dict  # generator index -> Element
    name: str = "D"
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        imgs = {}
        for k, v in self.images.items():
            i = self.alg.index[k] if isinstance(k, str) else k
            if not 0 <= i < self.alg.ngens:
                raise KeyError(f"unknown generator {k!r}")
            if v.alg is not self.alg:
                raise ValueError("image lives in a different algebra")
            want = self.alg.gens[i].deg + self.degree
            bad = {d for d in v.degrees() if d != want}
            if bad:
                raise ValueError(
                    f"{self.name}: image of {self.alg.gens[i].name} has degree {sorted(bad)}, expected {want}")
            imgs[i] = v
        self.images = imgs

    @property
    def parity(self) -> int:
        return self.degree % 2

    def image(self, i: int) -> Element:
        return self.images.get(i) or self.alg.zero()

    def apply_mono(self, mono: tuple) -> Element:
        hit = self._cache.get(mono)
        if hit is not None:
            return hit
        alg = self.alg
        fs = factors(alg, mono)
        out = alg.zero()
        sign_par = 0
        for pos, gi in enumerate(fs):
            img = self.images.get(gi)
            if img is not None and img.terms:
                left = alg.one()
                for j in fs[:pos]:
                    left = left * alg.gen(j)
                right = alg.one()
                for j in fs[pos + 1:]:
                    right = right * alg.gen(j)
                t = left * img * right
                if self.parity and sign_par:
                    t = -t
                out = out + t
            sign_par ^= alg.gens[gi].parity
        # factors were expanded in canonical order, which equals the stored monomial
        self._cache[mono] = out
        return out

    def __call__(self, x: Element) -> Element:
        if x.alg is not self.alg:
            raise ValueError("element lives in a different algebra")
        out = self.alg.zero()
        for m, c in x.terms.items():
            out = out + self.apply_mono(m).scale(c)
        return out

    # algebra of derivations ----------------------------------------------
    def __add__(self, o: "DerivationSpec") -> "DerivationSpec":
        _same(self, o)
        imgs = {i: self.image(i) + o.image(i) for i in set(self.images) | set(o.images)}
        return DerivationSpec(self.alg, self.degree, imgs, f"({self.name}+{o.name})")

    def __sub__(self, o):
        return self + o.scale(-1)

    def scale(self, c) -> "DerivationSpec":
        return DerivationSpec(self.alg, self.degree, {i: v.scale(c) for i, v in self.images.items()},
                              self.name)

    def __neg__(self):
        return self.scale(-1)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.images.values())

    def equals(self, o: "DerivationSpec") -> bool:
        return self.degree == o.degree and (self - o).is_zero()

    def mismatches(self, o: "DerivationSpec") -> list:
        """Generators on which two derivations differ."""
        return [self.alg.gens[i].name for i in range(self.alg.ngens) if not (self.image(i) - o.image(i)).is_zero()]


def _same(a: DerivationSpec, b: DerivationSpec):
    if a.alg is not b.alg:
        raise ValueError("derivations on different algebras")
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch {a.degree} vs {b.degree}")


def derive(x: Element, D: DerivationSpec) -> Element:
    return D(x)


def commutator(a: DerivationSpec, b: DerivationSpec) -> DerivationSpec:
    """Graded commutator [a, b] = ab - (-1)^{|a||b|} ba, again a derivation."""
    if a.alg is not b.alg:
        raise ValueError("derivations on different algebras")
    s = -1 if (a.degree * b.degree) % 2 else 1
    imgs = {}
    for i in range(a.alg.ngens):
        v = a(b.image(i)) - b(a.image(i)).scale(s)
        if not v.is_zero():
            imgs[i] = v
    return DerivationSpec(a.alg, a.degree + b.degree, imgs, f"[{a.name},{b.name}]")


def zero_derivation(alg: FreeGCA, degree: int, name: str = "0") -> DerivationSpec:
    return DerivationSpec(alg, degree, {}, name)


def mult_then(c: Element, D: DerivationSpec, name: str | None = None) -> DerivationSpec:
    """x ↦ c·D(x) for homogeneous c; a derivation of degree |c| + |D|."""
    degs = c.degrees()
    if len(degs) > 1:
        raise ValueError("multiplier must be homogeneous")
    dc = next(iter(degs)) if degs else 0
    imgs = {i: c * v for i, v in D.images.items()}
    return DerivationSpec(D.alg, dc + D.degree, imgs, name or f"{c}⊗{D.name}")


# ---------------------------------------------------------------------------
# g_dR algebras


@dataclass
class GdrAlgebra:
    """A FreeGCA with δ, contractions ι_a and Lie derivatives Lie_a."""

    alg: FreeGCA
    g: LieAlgebraData
    delta: DerivationSpec
    iota: list
    lie: list
    name: str = "W"

    def cartan_report(self) -> dict:
        g = self.g
        n = g.dim
        f = g.f
        rep = {}
        rep["delta^2=0"] = commutator(self.delta, self.delta).is_zero()
        rep["[delta,iota]=Lie"] = all(commutator(self.delta, self.iota[a]).equals(self.lie[a]) for a in range(n))
        rep["[delta,Lie]=0"] = all(commutator(self.delta, self.lie[a]).is_zero() for a in range(n))
        rep["[iota,iota]=0"] = all(commutator(self.iota[a], self.iota[b]).is_zero()
                                   for a in range(n) for b in range(n))

        def comb(ops, a, b):
            out = zero_derivation(self.alg, ops[0].degree)
            for c in range(n):
                if f[c][a][b]:
                    out = out + ops[c].scale(f[c][a][b])
            return out

        rep["[Lie,iota]=iota_[a,b]"] = all(
            commutator(self.lie[a], self.iota[b]).equals(comb(self.iota, a, b)) for a in range(n) for b in range(n))
        rep["[Lie,Lie]=Lie_[a,b]"] = all(
            commutator(self.lie[a], self.lie[b]).equals(comb(self.lie, a, b)) for a in range(n) for b in range(n))
        return rep

    def cartan_check(self) -> bool:
        return all(self.cartan_report().values())


def _gens_for(g: LieAlgebraData, specs: Sequence[tuple]) -> list:
    return [Gen(f"{p}{a}", d) for p, d in specs for a in range(g.dim)]


def weil_generators(g: LieAlgebraData, prefix: str = "") -> list:
    return _gens_for(g, [(prefix + "theta", 1), (prefix + "phi", 2)])


def _weil_structure(g: LieAlgebraData, alg: FreeGCA, prefix: str = ""):
    n = g.dim
    f = g.f
    th = [alg[f"{prefix}theta{a}"] for a in range(n)]
    ph = [alg[f"{prefix}phi{a}"] for a in range(n)]
    dW = {}
    for a in range(n):
        t = ph[a]
        u = alg.zero()
        for b in range(n):
            for c in range(n):
                if f[a][b][c]:
                    t = t - (th[b] * th[c]).scale(f[a][b][c] * E(Fraction(1, 2)))
                    u = u - (th[b] * ph[c]).scale(f[a][b][c])
        dW[alg.index[f"{prefix}theta{a}"]] = t
        dW[alg.index[f"{prefix}phi{a}"]] = u
    iota, lie = [], []
    for a in range(n):
        iota.append(DerivationSpec(alg, -1, {f"{prefix}theta{a}": alg.one()}, f"iota{a}"))
        imgs = {}
        for b in range(n):
            t = alg.zero()
            u = alg.zero()
            for c in range(n):
                if f[b][a][c]:
                    t = t - th[c].scale(f[b][a][c])
                    u = u - ph[c].scale(f[b][a][c])
            imgs[f"{prefix}theta{b}"] = t
            imgs[f"{prefix}phi{b}"] = u
        lie.append(DerivationSpec(alg, 0, imgs, f"Lie{a}"))
    return DerivationSpec(alg, 1, dW, "d_W"), iota, lie


def weil(g: LieAlgebraData, truncation: int = 4, prefix: str = "") -> GdrAlgebra:
    """W(g) with d_W, ι_a θ^b = δ_a^b, Lie_a θ^b = -f^b_ac θ^c (same for φ)."""
    if not g.jacobi_ok():
        raise ValueError(f"structure constants of {g.name} violate Jacobi")
    alg = FreeGCA(weil_generators(g, prefix), truncation)
    dW, iota, lie = _weil_structure(g, alg, prefix)
    return GdrAlgebra(alg, g, dW, iota, lie, f"W({g.name})")


def ground(g: LieAlgebraData, truncation: int = 4) -> GdrAlgebra:
    alg = FreeGCA([], truncation)
    return GdrAlgebra(alg, g, zero_derivation(alg, 1, "delta"),
                      [zero_derivation(alg, -1) for _ in range(g.dim)],
                      [zero_derivation(alg, 0) for _ in range(g.dim)], "ground")


def left_invariant_forms(g: LieAlgebraData, truncation: int = 4, prefix: str = "w") -> GdrAlgebra:
    """Λ(g^∨) with the Chevalley-Eilenberg differential δω^a = -½ f^a_bc ω^b ω^c."""
    n = g.dim
    f = g.f
    alg = FreeGCA([Gen(f"{prefix}{a}", 1) for a in range(n)], truncation)
    w = [alg[f"{prefix}{a}"] for a in range(n)]
    d = {}
    for a in range(n):
        t = alg.zero()
        for b in range(n):
            for c in range(n):
                if f[a][b][c]:
                    t = t - (w[b] * w[c]).scale(f[a][b][c] * E(Fraction(1, 2)))
        d[f"{prefix}{a}"] = t
    iota = [DerivationSpec(alg, -1, {f"{prefix}{a}": alg.one()}, f"iota{a}") for a in range(n)]
    lie = []
    for a in range(n):
        imgs = {}
        for b in range(n):
            t = alg.zero()
            for c in range(n):
                if f[b][a][c]:
                    t = t - w[c].scale(f[b][a][c])
            imgs[f"{prefix}{b}"] = t
        lie.append(DerivationSpec(alg, 0, imgs, f"Lie{a}"))
    return GdrAlgebra(alg, g, DerivationSpec(alg, 1, d, "delta_CE"), iota, lie, f"Lambda({g.name}^v)")


def module_algebra(g: LieAlgebraData, kind: str, truncation: int = 4) -> GdrAlgebra:
    if kind in ("ground", "none", "field"):
        return ground(g, truncation)
    if kind in ("lambda", "ce", "Lambda"):
        return left_invariant_forms(g, truncation)
    if kind in ("weil", "W"):
        return weil(g, truncation, prefix="m")
    raise KeyError(f"unknown module algebra {kind!r}")


# ---------------------------------------------------------------------------
# tensor products, Kalkman and Chevalley-Eilenberg differentials


@dataclass
class TensorModel:
    """W(g) ⊗ A with the lifted derivations of both factors."""

    W: GdrAlgebra
    A: GdrAlgebra
    alg: FreeGCA

    def lift(self, D: DerivationSpec, side: str) -> DerivationSpec:
        src = self.W.alg if side == "W" else self.A.alg
        imgs = {self.alg.index[src.gens[i].name]: src.embed(v, self.alg) for i, v in D.images.items()}
        return DerivationSpec(self.alg, D.degree, imgs, f"{D.name}⊗1" if side == "W" else f"1⊗{D.name}")

    def theta(self, a: int) -> Element:
        return self.alg[f"theta{a}"]

    def phi(self, a: int) -> Element:
        return self.alg[f"phi{a}"]

    @property
    def dim(self) -> int:
        return self.W.g.dim


def tensor_model(g: LieAlgebraData, A: GdrAlgebra, truncation: int = 4) -> TensorModel:
    W = weil(g, truncation)
    alg = W.alg.tensor(A.alg, truncation)
    return TensorModel(W, A, alg)


def kalkman(g: LieAlgebraData, A: GdrAlgebra, truncation: int = 4, model: TensorModel | None = None):
    """d_K = d_W⊗1 + 1⊗δ + θ^a⊗Lie_a - φ^a⊗ι_a on W(g) ⊗ A."""
    if not A.cartan_check():
        raise ValueError(f"module algebra {A.name} fails the Cartan relations")
    T = model or tensor_model(g, A, truncation)
    dK = T.lift(T.W.delta, "W") + T.lift(A.delta, "A")
    for a in range(g.dim):
        dK = dK + mult_then(T.theta(a), T.lift(A.lie[a], "A"))
        dK = dK - mult_then(T.phi(a), T.lift(A.iota[a], "A"))
    dK.name = "d_K"
    return dK, T


@dataclass
class LInfinityData:
    """Finite graded L∞ algebra with l₁, l₂ and a module given by ρ₁, ρ₂.

    Basis elements carry degrees; ``l1[i]`` and ``l2[(i, j)]`` are sparse
    coordinate dicts.  ``rho1`` is a derivation of the module algebra and
    ``rho2[i]`` the derivation by which basis element i acts.
    """

    degrees: list
    names: list
    l1: dict
    l2: dict
    rho1: DerivationSpec
    rho2: list

    def jacobi_report(self) -> dict:
        """Low-order identities of the L∞ module: l₁²=0, ρ₁²=0, and the
        compatibilities [ρ₁, ρ₂(x)] = ρ₂(l₁x), [ρ₂(x), ρ₂(y)] = ρ₂(l₂(x,y))."""
        n = len(self.degrees)
        rep = {}
        rep["l1^2=0"] = all(not _coord_apply(self.l1, _coord_apply(self.l1, {i: ONE})) for i in range(n))
        rep["rho1^2=0"] = commutator(self.rho1, self.rho1).is_zero()
        alg = self.rho1.alg

        def rho_of(coords: dict, deg: int) -> DerivationSpec:
            out = zero_derivation(alg, deg)
            for k, c in coords.items():
                out = out + self.rho2[k].scale(c)
            return out

        ok = True
        for i in range(n):
            lhs = commutator(self.rho1, self.rho2[i])
            rhs = rho_of(self.l1.get(i, {}), self.degrees[i] + 1)
            ok &= lhs.equals(rhs) if lhs.degree == rhs.degree else lhs.is_zero() and rhs.is_zero()
        rep["[rho1,rho2]=rho2(l1)"] = ok
        ok = True
        for i in range(n):
            for j in range(n):
                lhs = commutator(self.rho2[i], self.rho2[j])
                rhs = rho_of(self.l2.get((i, j), {}), self.degrees[i] + self.degrees[j])
                ok &= lhs.equals(rhs)
        rep["[rho2,rho2]=rho2(l2)"] = ok
        return rep


def _coord_apply(table: dict, coords: dict) -> dict:
    out: dict = {}
    for i, c in coords.items():
        for k, v in table.get(i, {}).items():
            out[k] = out.get(k, ZERO) + c * v
    return {k: v for k, v in out.items() if v}


def gdr_linf(A: GdrAlgebra) -> LInfinityData:
    """g_dR = g[1] ⊕ g: basis ι_a (degree -1) then Lie_a (degree 0)."""
    g = A.g
    n = g.dim
    f = g.f
    degrees = [-1] * n + [0] * n
    names = [f"iota{a}" for a in range(n)] + [f"Lie{a}" for a in range(n)]
    l1 = {a: {n + a: ONE} for a in range(n)}
    l2 = {}
    for a in range(n):
        for b in range(n):
            ll = {n + c: f[c][a][b] for c in range(n) if f[c][a][b]}
            li = {c: f[c][a][b] for c in range(n) if f[c][a][b]}
            mi = {c: -f[c][a][b] for c in range(n) if f[c][a][b]}
            if ll:
                l2[(n + a, n + b)] = ll
            if li:
                l2[(n + a, b)] = li      # [Lie_a, ι_b] = f^c_ab ι_c
                l2[(b, n + a)] = mi      # graded antisymmetry (degrees 0 and -1)
    return LInfinityData(degrees, names, l1, l2, A.delta, list(A.iota) + list(A.lie))


def ce_differential(L: LInfinityData, A: GdrAlgebra, truncation: int = 4, model: TensorModel | None = None):
    """d_CE on Sym(L^∨[1]) ⊗ A, assembled from the duals of l₁, l₂ and from ρ₁, ρ₂.

    Generator x^k (dual to basis element e_k) has degree 1 - deg(e_k):
        d x^k = Σ_i (l₁)^k_i x^i - ½ Σ_{i,j} (-1)^{deg e_i} (l₂)^k_{ij} x^i x^j
        d ω   = ρ₁ω + Σ_i (-1)^{deg e_i} x^i ρ₂(e_i) ω
    With g_dR the dual of Lie_a is θ^a and the dual of ι_a is φ^a.
    """
    rep = L.jacobi_report()
    if not all(rep.values()):
        bad = [k for k, v in rep.items() if not v]
        raise ValueError(f"L∞ module identities fail: {bad}")
    T = model or tensor_model(A.g, A, truncation)
    dual_name = {}
    for i, nm in enumerate(L.names):
        a = int("".join(ch for ch in nm if ch.isdigit()))
        dual_name[i] = f"phi{a}" if nm.startswith("iota") else f"theta{a}"
    x = {i: T.alg[dual_name[i]] for i in range(len(L.names))}
    imgs = {}
    for k in range(len(L.names)):
        t = T.alg.zero()
        for i, col in L.l1.items():
            if k in col:
                t = t + x[i].scale(col[k])
        for (i, j), col in L.l2.items():
            if k in col:
                # décalage sign (-1)^{deg e_i}
                c = col[k] * E(Fraction(1, 2))
                t = t + (x[i] * x[j]).scale(c if L.degrees[i] % 2 else -c)
        imgs[T.alg.index[dual_name[k]]] = t
    rho1 = T.lift(L.rho1, "A")
    for gi, gen in enumerate(A.alg.gens):
        ti = T.alg.index[gen.name]
        t = rho1.image(ti)
        for i in range(len(L.names)):
            r = T.lift(L.rho2[i], "A").image(ti)
            if r.is_zero():
                continue
            term = x[i] * r
            t = t - term if L.degrees[i] % 2 else t + term
        imgs[ti] = t
    return DerivationSpec(T.alg, 1, imgs, "d_CE"), T


def ce_equals_kalkman(g: LieAlgebraData, A: GdrAlgebra, truncation: int = 4) -> dict:
    dK, T = kalkman(g, A, truncation)
    dCE, _ = ce_differential(gdr_linf(A), A, truncation, model=T)
    bad = dK.mismatches(dCE)
    return {"agree": not bad, "mismatched_generators": bad}


# ---------------------------------------------------------------------------
# connections, Chern-Weil, Mathai-Quillen


def tensor_gdr(T: TensorModel) -> GdrAlgebra:
    """W(g) ⊗ A as a g_dR-algebra with the Weil-model (diagonal) operations."""
    n = T.dim
    delta = T.lift(T.W.delta, "W") + T.lift(T.A.delta, "A")
    iota = [T.lift(T.W.iota[a], "W") + T.lift(T.A.iota[a], "A") for a in range(n)]
    lie = [T.lift(T.W.lie[a], "W") + T.lift(T.A.lie[a], "A") for a in range(n)]
    return GdrAlgebra(T.alg, T.W.g, delta, iota, lie, f"{T.W.name}⊗{T.A.name}")


def connection_curvature(W: GdrAlgebra, Theta: Sequence[Element]):
    """Ω^a = δΘ^a + ½ f^a_bc Θ^b Θ^c together with the connection-axiom report."""
    g = W.g
    n = g.dim
    f = g.f
    alg = W.alg
    rep = {"iota": True, "lie": True}
    for a in range(n):
        for b in range(n):
            want = alg.one() if a == b else alg.zero()
            if not (W.iota[a](Theta[b]) - want).is_zero():
                rep["iota"] = False
            # Lie_a Θ = -[ξ_a, Θ]  ⇔  Lie_a Θ^b = -f^b_ac Θ^c
            t = alg.zero()
            for c in range(n):
                if f[b][a][c]:
                    t = t - Theta[c].scale(f[b][a][c])
            if not (W.lie[a](Theta[b]) - t).is_zero():
                rep["lie"] = False
    Omega = []
    for a in range(n):
        t = W.delta(Theta[a])
        for b in range(n):
            for c in range(n):
                if f[a][b][c]:
                    t = t + (Theta[b] * Theta[c]).scale(f[a][b][c] * E(Fraction(1, 2)))
        Omega.append(t)
    return Omega, rep


def bianchi_ok(W: GdrAlgebra, Theta, Omega) -> bool:
    """δΩ + [Θ, Ω] = 0."""
    f = W.g.f
    n = W.g.dim
    for a in range(n):
        t = W.delta(Omega[a])
        for b in range(n):
            for c in range(n):
                if f[a][b][c]:
                    t = t + (Theta[b] * Omega[c]).scale(f[a][b][c])
        if not t.is_zero():
            return False
    return True


def substitute(x: Element, images: dict, target: FreeGCA) -> Element:
    """Algebra morphism defined on generators (by index) applied to x."""
    out = target.zero()
    for m, c in x.terms.items():
        t = target.one().scale(c)
        for gi in factors(x.alg, m):
            t = t * images[gi]
        out = out + t
    return out


def chern_weil(Wg: GdrAlgebra, target: GdrAlgebra, Theta: Sequence[Element]):
    """CW_Θ: θ^a ↦ Θ^a, φ^a ↦ Ω^a, with a report on δ, ι_a, Lie_a compatibility."""
    Omega, conn = connection_curvature(target, Theta)
    n = Wg.g.dim
    images = {}
    for a in range(n):
        images[Wg.alg.index[f"theta{a}"]] = Theta[a]
        images[Wg.alg.index[f"phi{a}"]] = Omega[a]

    def cw(x):
        return substitute(x, images, target.alg)

    rep = {"connection": all(conn.values()), "delta": True, "iota": True, "lie": True}
    for gi in range(Wg.alg.ngens):
        x = Wg.alg.gen(gi)
        if not (cw(Wg.delta(x)) - target.delta(cw(x))).is_zero():
            rep["delta"] = False
        for a in range(n):
            if not (cw(Wg.iota[a](x)) - target.iota[a](cw(x))).is_zero():
                rep["iota"] = False
            if not (cw(Wg.lie[a](x)) - target.lie[a](cw(x))).is_zero():
                rep["lie"] = False
    return cw, rep


class MQAutomorphism:
    """T_Θ = exp(Θ^a ⊗ ι_a) on W ⊗ A (finite: the exponent is nilpotent)."""

    def __init__(self, T: TensorModel, Theta: Sequence[Element] | None = None, sign: int = 1):
        self.T = T
        n = T.dim
        Theta = Theta if Theta is not None else [T.theta(a) for a in range(n)]
        D = zero_derivation(T.alg, 0, "Theta.iota")
        for a in range(n):
            D = D + mult_then(Theta[a], T.lift(T.A.iota[a], "A"))
        self.D = D.scale(sign)
        self.D.name = "Theta^a⊗iota_a"

    def _exp(self, x: Element, s: int) -> Element:
        out = x
        term = x
        for j in range(1, 64):
            term = self.D(term).scale(E(Fraction(s, j)))
            if term.is_zero():
                return out
            out = out + term
        raise ArithmeticError("Mathai-Quillen exponential did not terminate")

    def __call__(self, x: Element) -> Element:
        return self._exp(x, 1)

    def inverse(self, x: Element) -> Element:
        return self._exp(x, -1)

    def conjugate(self, X: DerivationSpec) -> DerivationSpec:
        """T ∘ X ∘ T⁻¹ = Σ_k ad_D^k(X)/k! as a derivation."""
        out = X
        term = X
        for j in range(1, 64):
            term = commutator(self.D, term).scale(E(Fraction(1, j)))
            if term.is_zero():
                out.name = f"T∘{X.name}∘T^-1"
                return out
            out = out + term
        raise ArithmeticError("conjugation series did not terminate")

    def conjugate_apply(self, X: Callable[[Element], Element], x: Element) -> Element:
        return self(X(self.inverse(x)))


def kalkman_conjugation_check(g: LieAlgebraData, A: GdrAlgebra, truncation: int = 4,
                              direction: str = "literal") -> dict:
    """The three conjugation identities for T_θ = exp(θ^a⊗ι_a) on W(g) ⊗ A.

    ``direction="literal"`` tests T∘X∘T⁻¹ exactly as stated;
    ``direction="reversed"`` tests T⁻¹∘X∘T (i.e. conjugation by exp(-θ^a⊗ι_a)).
    """
    if direction not in ("literal", "reversed"):
        raise ValueError("direction must be 'literal' or 'reversed'")
    dK, T = kalkman(g, A, truncation)
    mq = MQAutomorphism(T, sign=1 if direction == "literal" else -1)
    n = g.dim
    rep = {}
    split = T.lift(T.W.delta, "W") + T.lift(A.delta, "A")
    rep["T d_K T^-1 = d_W⊗1 + 1⊗δ"] = mq.conjugate(dK).mismatches(split)
    bad_i, bad_l = [], []
    for a in range(n):
        lhs = mq.conjugate(T.lift(T.W.iota[a], "W"))
        rhs = T.lift(T.W.iota[a], "W") + T.lift(A.iota[a], "A")
        bad_i += [f"a={a}:{m}" for m in lhs.mismatches(rhs)]
        tot = T.lift(T.W.lie[a], "W") + T.lift(A.lie[a], "A")
        bad_l += [f"a={a}:{m}" for m in mq.conjugate(tot).mismatches(tot)]
    rep["T (iota_a⊗1) T^-1 = iota_a⊗1 + 1⊗iota_a"] = bad_i
    rep["T (Lie_a⊗1 + 1⊗Lie_a) T^-1 = same"] = bad_l
    return {k: {"pass": not v, "mismatches": v} for k, v in rep.items()}


# ---------------------------------------------------------------------------
# full suite


def equivariant_suite(gname: str, module: str, truncation: int = 4) -> dict:
    g = lie_algebra(gname)
    A = module_algebra(g, module, truncation)
    W = weil(g, truncation)
    out: dict = {"g": gname, "module": module, "truncation": truncation, "checks": {}}
    ch = out["checks"]
    ch.update({f"W: {k}": v for k, v in W.cartan_report().items()})
    ch.update({f"A: {k}": v for k, v in A.cartan_report().items()})
    ch["d_W^2=0"] = commutator(W.delta, W.delta).is_zero()
    dK, T = kalkman(g, A, truncation)
    ch["d_K^2=0"] = commutator(dK, dK).is_zero()
    dCE, _ = ce_differential(gdr_linf(A), A, truncation, model=T)
    ch["d_CE^2=0"] = commutator(dCE, dCE).is_zero()
    ch["d_CE = d_K"] = not dK.mismatches(dCE)
    for k, v in kalkman_conjugation_check(g, A, truncation).items():
        ch[k] = v["pass"]
    out["reversed_conjugation"] = {
        k: v["pass"] for k, v in kalkman_conjugation_check(g, A, truncation, "reversed").items()}
    TW = tensor_gdr(T)
    ch.update({f"W⊗A: {k}": v for k, v in TW.cartan_report().items()})
    theta = [T.theta(a) for a in range(g.dim)]
    Omega, conn = connection_curvature(TW, theta)
    ch["connection axioms"] = all(conn.values())
    ch["curvature of theta is phi"] = all((Omega[a] - T.phi(a)).is_zero() for a in range(g.dim))
    ch["Bianchi"] = bianchi_ok(TW, theta, Omega)
    _, cwrep = chern_weil(W, TW, theta)
    ch["Chern-Weil morphism"] = all(cwrep.values())
    out["pass"] = all(ch.values())
    return out
