"""Concrete representation data.

Matrix Lie algebras with exact structure constants and the normalized
negative trace pairing, Euclidean Cl(4) gamma matrices with chirality
projectors, twisted Dirac operators on torus spinors, the quadratic spinor
map μ and its polarization, and the Clifford bimodule of forms used by the
Kapustin-Witten twist.

Sign conventions:
    γ_μγ_ν + γ_νγ_μ = -2δ_{μν}, γ₅ = -γ₁γ₂γ₃γ₄, P± = ½(1 ± γ₅).
    S⁺ is the +1 eigenspace of γ₅; μ maps it to self-dual 2-forms.
    Bases of Lie algebras are orthonormal for ⟨x, y⟩ = -c·Tr(xy).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exact_core import ExactScalar
from .torus_forms import (
    FourierForm,
    codifferential,
    exterior_d,
    hodge_star,
    interior,
    partial,
    wedge,
)

E = ExactScalar
ZERO = E(0)
ONE = E(1)
I = E(0, 1)

Matrix = list  # list of rows of ExactScalar


def mat(rows) -> Matrix:
    return [[E.coerce(x) for x in r] for r in rows]


def mzeros(n, m=None) -> Matrix:
    return [[ZERO] * (n if m is None else m) for _ in range(n)]


def meye(n) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def mmul(a: Matrix, b: Matrix) -> Matrix:
    m = len(b[0])
    out = []
    for row in a:
        r = [ZERO] * m
        for k, x in enumerate(row):
            if x:
                bk = b[k]
                for j in range(m):
                    if bk[j]:
                        r[j] = r[j] + x * bk[j]
        out.append(r)
    return out


def madd(a: Matrix, b: Matrix, cb=ONE) -> Matrix:
    return [[x + y * cb for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mscale(a: Matrix, c) -> Matrix:
    c = E.coerce(c)
    return [[x * c for x in r] for r in a]


def mcomm(a: Matrix, b: Matrix) -> Matrix:
    return madd(mmul(a, b), mmul(b, a), E(-1))


def mtrace(a: Matrix):
    t = ZERO
    for i in range(len(a)):
        t = t + a[i][i]
    return t


def mdagger(a: Matrix) -> Matrix:
    return [[a[j][i].conj() for j in range(len(a))] for i in range(len(a[0]))]


def mkron(a: Matrix, b: Matrix) -> Matrix:
    na, nb = len(a), len(b)
    out = mzeros(na * nb)
    for i in range(na):
        for j in range(na):
            if a[i][j]:
                for k in range(nb):
                    for l in range(nb):
                        if b[k][l]:
                            out[i * nb + k][j * nb + l] = a[i][j] * b[k][l]
    return out


def mequal(a: Matrix, b: Matrix) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def mis_zero(a: Matrix) -> bool:
    return all(not x for r in a for x in r)


# ---------------------------------------------------------------------------
# Lie algebras


@dataclass
class LieAlgebraData:
    """Matrix Lie algebra with an orthonormal basis for ⟨x,y⟩ = -c Tr(xy)."""

    name: str
    basis: list
    trace_scale: Fraction = Fraction(1)

    def __post_init__(self):
        self.basis = [mat(b) for b in self.basis]
        p = self.pairing_matrix
        for a in range(self.dim):
            for b in range(self.dim):
                want = ONE if a == b else ZERO
                if p[a][b] != want:
                    raise ValueError(f"basis of {self.name} is not orthonormal for the trace pairing")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def matrix_size(self) -> int:
        return len(self.basis[0])

    def pair(self, x: Matrix, y: Matrix):
        return -mtrace(mmul(x, y)) * E(self.trace_scale)

    @cached_property
    def pairing_matrix(self) -> list:
        return [[self.pair(x, y) for y in self.basis] for x in self.basis]

    def coordinates(self, x: Matrix) -> list:
        """Coordinates of a matrix in the basis; raises if x leaves the span."""
        c = [self.pair(b, x) for b in self.basis]
        recon = mzeros(self.matrix_size)
        for ca, b in zip(c, self.basis):
            recon = madd(recon, b, ca)
        if not mequal(recon, x):
            raise ValueError(f"matrix is not in the span of the {self.name} basis")
        return c

    def element(self, coords: Sequence) -> Matrix:
        out = mzeros(self.matrix_size)
        for ca, b in zip(coords, self.basis):
            out = madd(out, b, E.coerce(ca))
        return out

    @cached_property
    def f(self) -> list:
        """f[c][a][b] with [ξ_a, ξ_b] = f^c_{ab} ξ_c."""
        return structure_constants(self)

    @cached_property
    def bracket_table(self) -> dict:
        t = {}
        f = self.f
        for a in range(self.dim):
            for b in range(self.dim):
                outs = tuple((c, f[c][a][b]) for c in range(self.dim) if f[c][a][b])
                if outs:
                    t[(a, b)] = outs
        return t

    @cached_property
    def pairing_table(self) -> dict:
        return {(a, b): ((0, self.pairing_matrix[a][b]),)
                for a in range(self.dim) for b in range(self.dim) if self.pairing_matrix[a][b]}

    @cached_property
    def ad_matrices(self) -> list:
        """Matrices of ad(ξ_a) in the basis: (ad ξ_a)_{cb} = f^c_{ab}."""
        f = self.f
        return [[[f[c][a][b] for b in range(self.dim)] for c in range(self.dim)] for a in range(self.dim)]

    def jacobi_ok(self) -> bool:
        f = self.f
        n = self.dim
        for a, b, c, e in itertools.product(range(n), repeat=4):
            s = ZERO
            for d in range(n):
                s = s + f[d][a][b] * f[e][d][c] + f[d][b][c] * f[e][d][a] + f[d][c][a] * f[e][d][b]
            if s:
                return False
        return True

    def is_abelian(self) -> bool:
        return not self.bracket_table


def structure_constants(g: LieAlgebraData) -> list:
    n = g.dim
    f = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            c = g.coordinates(mcomm(g.basis[a], g.basis[b]))
            for k in range(n):
                f[k][a][b] = c[k]
    return f


_PAULI = [
    [[0, 1], [1, 0]],
    [[0, E(0, -1)], [E(0, 1), 0]],
    [[1, 0], [0, -1]],
]


def pauli(k: int) -> Matrix:
    return mat(_PAULI[k])


def u1() -> LieAlgebraData:
    return LieAlgebraData("u1", [[[I]]], Fraction(1))


def su2() -> LieAlgebraData:
    # ξ_a = -(i/2) σ_a, [ξ_a, ξ_b] = ε_abc ξ_c, -2 Tr(ξ_a ξ_b) = δ_ab
    return LieAlgebraData("su2", [mscale(pauli(k), E(0, Fraction(-1, 2))) for k in range(3)], Fraction(2))


def so3() -> LieAlgebraData:
    basis = []
    for a in range(3):
        m = mzeros(3)
        for b in range(3):
            for c in range(3):
                m[b][c] = E(-_levi(a, b, c))
        basis.append(m)
    return LieAlgebraData("so3", basis, Fraction(1, 2))


def so(n: int) -> LieAlgebraData:
    if n % 2:
        raise ValueError("so(2m) needs an even size")
    basis = []
    for i in range(n):
        for j in range(i + 1, n):
            m = mzeros(n)
            m[i][j] = E(1)
            m[j][i] = E(-1)
            basis.append(m)
    return LieAlgebraData(f"so{n}", basis, Fraction(1, 2))


def u2() -> LieAlgebraData:
    half_i = E(0, Fraction(1, 2))
    basis = [mscale(meye(2), half_i)] + [mscale(pauli(k), -half_i) for k in range(3)]
    return LieAlgebraData("u2", basis, Fraction(2))


def _levi(a, b, c) -> int:
    if len({a, b, c}) < 3:
        return 0
    return 1 if (a, b, c) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else -1


LIE_ALGEBRAS = {"u1": u1, "su2": su2, "so3": so3, "u2": u2, "so4": lambda: so(4)}


def lie_algebra(name: str) -> LieAlgebraData:
    if name in LIE_ALGEBRAS:
        return LIE_ALGEBRAS[name]()
    if name.startswith("so") and name[2:].isdigit():
        return so(int(name[2:]))
    raise KeyError(f"unknown Lie algebra {name!r}")


# ---------------------------------------------------------------------------
# Clifford algebra Cl(4)


def gamma_matrices(clifford_sign: int = -1) -> list:
    """Chiral-basis gammas with γ_μγ_ν + γ_νγ_μ = 2·clifford_sign·δ_{μν}."""
    s = [mscale(pauli(0), I), mscale(pauli(1), I), mscale(pauli(2), I), meye(2)]
    out = []
    for sm in s:
        g = mzeros(4)
        sd = mdagger(sm)
        for i in range(2):
            for j in range(2):
                g[i][2 + j] = sm[i][j]
                g[2 + i][j] = -sd[i][j]
        if clifford_sign > 0:
            g = mscale(g, I)
        out.append(g)
    return out


@dataclass
class CliffordModule:
    """Spinor module C⁴ ⊗ V with Clifford action on the first factor.

    ``rep[a]`` is the matrix of ρ(ξ_a) on V for the Lie algebra ``g``.
    Components are ordered as index ``s * dim V + v``.
    """

    g: LieAlgebraData
    rep: list
    name: str = "spinor"
    clifford_sign: int = -1

    def __post_init__(self):
        self.rep = [mat(r) for r in self.rep]
        self.gammas = gamma_matrices(self.clifford_sign)
        g5 = meye(4)
        for gm in self.gammas:
            g5 = mmul(g5, gm)
        # orientation: S⁺ is where μ lands in the self-dual forms
        g5 = mscale(g5, E(-1))
        self.gamma5 = g5
        self.P = {+1: mscale(madd(meye(4), g5), Fraction(1, 2)),
                  -1: mscale(madd(meye(4), g5, E(-1)), Fraction(1, 2))}

    @property
    def vdim(self) -> int:
        return len(self.rep[0])

    @property
    def dim(self) -> int:
        return 4 * self.vdim

    def lift_gamma(self, m: Matrix) -> Matrix:
        return mkron(m, meye(self.vdim))

    def lift_rep(self, m: Matrix) -> Matrix:
        return mkron(meye(4), m)

    @cached_property
    def Gamma(self) -> list:
        return [self.lift_gamma(gm) for gm in self.gammas]

    @cached_property
    def Gamma5(self) -> Matrix:
        return self.lift_gamma(self.gamma5)

    @cached_property
    def Proj(self) -> dict:
        return {s: self.lift_gamma(p) for s, p in self.P.items()}

    @cached_property
    def Rho(self) -> list:
        return [self.lift_rep(r) for r in self.rep]

    @cached_property
    def rep_table(self) -> dict:
        """ξ_a ⊗ s_j ↦ ρ(ξ_a) s_j."""
        return _action_table(self.Rho)

    def clifford_rep_table(self, mu: int) -> dict:
        """ξ_a ⊗ s_j ↦ γ_μ ρ(ξ_a) s_j."""
        return _action_table([mmul(self.Gamma[mu], r) for r in self.Rho])

    @cached_property
    def hermitian_table(self) -> dict:
        return {(j, j): ((0, ONE),) for j in range(self.dim)}

    def chirality(self, sigma: FourierForm) -> int | None:
        """+1 / -1 if σ lies in S^± pointwise, None otherwise (0 for σ = 0)."""
        if sigma.is_zero():
            return 0
        if sigma.map_components(self.Proj[-1]).is_zero():
            return +1
        if sigma.map_components(self.Proj[+1]).is_zero():
            return -1
        return None


def _action_table(mats: Sequence[Matrix]) -> dict:
    t = {}
    for a, m in enumerate(mats):
        for k in range(len(m)):
            for j in range(len(m)):
                if m[k][j]:
                    t.setdefault((a, j), []).append((k, m[k][j]))
    return {k: tuple(v) for k, v in t.items()}


def sw_module(clifford_sign: int = -1) -> CliffordModule:
    """U(1) acting on S = C⁴ with charge one."""
    return CliffordModule(u1(), [[[I]]], "sw", clifford_sign)


def so3_monopole_module(clifford_sign: int = -1) -> CliffordModule:
    """S = C⁴ ⊗ C² with so(3) ≅ su(2) acting on C² by the fundamental."""
    g = su2()
    g.name = "so3"
    return CliffordModule(g, [b for b in su2().basis], "so3_monopole", clifford_sign)


# ---------------------------------------------------------------------------
# operators on torus fields

def scalar_action_table(m: int) -> dict:
    """Scalar form (value dim 1) times an m-valued form."""
    return {(0, j): ((j, ONE),) for j in range(m)}


def bracket(g: LieAlgebraData, a: FourierForm, b: FourierForm) -> FourierForm:
    """[α ∧ β] for ad-valued forms."""
    return wedge(a, b, g.bracket_table, g.dim)


def lie_pair(g: LieAlgebraData, a: FourierForm, b: FourierForm) -> FourierForm:
    return wedge(a, b, g.pairing_table, 1)


def act(module: CliffordModule, a: FourierForm, s: FourierForm) -> FourierForm:
    """ρ(α) ∧ σ for an ad-valued form α acting on a spinor-valued form σ."""
    return wedge(a, s, module.rep_table, module.dim)


def gamma_apply(module: CliffordModule, s: FourierForm, mu: int) -> FourierForm:
    """Clifford multiplication by e_μ on spinor values."""
    return s.map_components(module.Gamma[mu])


def dx_wedge(mu: int, a: FourierForm) -> FourierForm:
    """dx^μ ∧ α."""
    return wedge(FourierForm.dx(mu, n=a.n, N=a.N), a, scalar_action_table(a.m), a.m)


def cov_d(g: LieAlgebraData, A: FourierForm | None, a: FourierForm) -> FourierForm:
    """d_A α = dα + [A ∧ α] on ad-valued forms."""
    out = exterior_d(a)
    if A is not None and not A.is_zero():
        out = out + bracket(g, A, a)
    return out


def cov_d_spinor(module: CliffordModule, A: FourierForm | None, s: FourierForm) -> FourierForm:
    out = exterior_d(s)
    if A is not None and not A.is_zero():
        out = out + act(module, A, s)
    return out


def cov_codiff(g: LieAlgebraData, A: FourierForm | None, a: FourierForm) -> FourierForm:
    """d_A^* α = d^*α - Σ_μ ι_μ[A_μ, α] (formal adjoint of d_A)."""
    out = codifferential(a)
    if A is not None and not A.is_zero():
        for mu in range(a.n):
            Amu = interior(A, mu)
            if Amu.is_zero():
                continue
            out = out - interior(bracket(g, Amu, a), mu)
    return out


def curvature(g: LieAlgebraData, A: FourierForm) -> FourierForm:
    """F_A = dA + ½[A ∧ A]."""
    return exterior_d(A) + bracket(g, A, A).scale(Fraction(1, 2))


def dirac(module: CliffordModule, sigma: FourierForm, A: FourierForm | None = None) -> FourierForm:
    """D̸_A σ = Σ_μ γ_μ(∂_μ σ + ρ(A_μ)σ) on spinor-valued 0-forms."""
    if sigma.terms and sigma.degrees() != {0}:
        raise ValueError("Dirac operator acts on spinor-valued 0-forms")
    out = sigma.like()
    for mu in range(sigma.n):
        t = partial(sigma, mu)
        if A is not None and not A.is_zero():
            Amu = interior(A, mu)
            if not Amu.is_zero():
                t = t + act(module, Amu, sigma)
        out = out + gamma_apply(module, t, mu)
    return out


def clifford_act(module: CliffordModule, omega: FourierForm, sigma: FourierForm) -> FourierForm:
    """ωσ := Σ_μ γ_μ ρ(ι_μ ω) σ (Clifford multiplication combined with the Lie action)."""
    out = None
    for mu in range(omega.n):
        w = interior(omega, mu)
        if w.is_zero():
            continue
        t = wedge(w, sigma, module.clifford_rep_table(mu), module.dim)
        out = t if out is None else out + t
    if out is None:
        return FourierForm.zero(sigma.n, module.dim, sigma.N)
    return out


# ---------------------------------------------------------------------------
# the quadratic map μ


def _mu_tables(module: CliffordModule):
    """For μ<ν: table (j, k) ↦ [(a, c)] with ⟨γ_μγ_ν ρ(ξ_a)σ, υ⟩ = Σ c conj(σ_j) υ_k."""
    cache = module.__dict__.setdefault("_mu_cache", None)
    if cache is not None:
        return cache
    out = {}
    for mu in range(4):
        for nu in range(mu + 1, 4):
            GG = mmul(module.Gamma[mu], module.Gamma[nu])
            table = {}
            for a, R in enumerate(module.Rho):
                X = mmul(GG, R)
                for k in range(module.dim):
                    for j in range(module.dim):
                        if X[k][j]:
                            table.setdefault((j, k), []).append((a, X[k][j].conj()))
            out[(mu, nu)] = {key: tuple(v) for key, v in table.items()}
    module.__dict__["_mu_cache"] = out
    return out


def mu_bilinear(module: CliffordModule, sigma: FourierForm, upsilon: FourierForm,
                polarization: Fraction = Fraction(1, 2)) -> FourierForm:
    """Bilinear form of μ, normalized as ``polarization``·(μ(σ+υ) - μ(σ) - μ(υ)).

    Evaluated as Re⟨e_μe_ν ⊗ ξ^a σ, υ⟩ (e^μ∧e^ν) ⊗ ξ_a summed over ordered
    pairs (μ, ν), with Grassmann coefficients of σ kept to the left.  The
    default ½ gives μ(σ, σ) = μ(σ).
    """
    scale = E(2 * Fraction(polarization))
    g = module.g
    sc = sigma.conj()
    out = FourierForm.zero(sigma.n, g.dim, sigma.N)
    for (mu, nu), table in _mu_tables(module).items():
        p = wedge(sc, upsilon, table, g.dim)
        if p.is_zero():
            continue
        # ordered pairs (μ,ν) and (ν,μ) contribute equally: factor 2
        p = p.real_part().scale(E(2))
        out = out + dx_wedge_pair(mu, nu, p)
    return out.scale(scale)


def dx_wedge_pair(mu: int, nu: int, a: FourierForm) -> FourierForm:
    return wedge(FourierForm.dx(mu, nu, n=a.n, N=a.N), a, scalar_action_table(a.m), a.m)


def mu_map(module: CliffordModule, sigma: FourierForm) -> FourierForm:
    """μ(σ) = ⟨e_μe_ν ⊗ ξ^a σ, σ⟩ (e^μ∧e^ν) ⊗ ξ_a."""
    return mu_bilinear(module, sigma, sigma)


# ---------------------------------------------------------------------------
# Clifford bimodule of forms


def form_clifford(mu: int, omega: FourierForm, side: str = "left") -> FourierForm:
    """Clifford action of dx^μ on forms.

    left:  c(e)ω = e∧ω - ι_e ω
    right: ω·e  = (-1)^k (e∧ω + ι_e ω) on k-forms
    Both square to -1 for unit e.
    """
    if side == "left":
        return dx_wedge(mu, omega) - interior(omega, mu)
    if side != "right":
        raise ValueError("side must be 'left' or 'right'")
    out = omega.like()
    for k in sorted(omega.degrees()):
        part = omega.degree_part(k)
        t = dx_wedge(mu, part) + interior(part, mu)
        out = out + (t if k % 2 == 0 else -t)
    return out


def form_dirac(g: LieAlgebraData, A: FourierForm | None, omega: FourierForm) -> FourierForm:
    """Σ_μ c(dx^μ)(∂_μ ω + [A_μ, ω]) on ad-valued forms."""
    out = omega.like()
    for mu in range(omega.n):
        t = partial(omega, mu)
        if A is not None and not A.is_zero():
            Amu = interior(A, mu)
            if not Amu.is_zero():
                t = t + bracket(g, Amu, omega)
        out = out + form_clifford(mu, t)
    return out


def mu_kw(g: LieAlgebraData, sigma: FourierForm) -> FourierForm:
    """[σ ∧ σ] for an ad-valued 1-form σ."""
    if sigma.terms and sigma.degrees() != {1}:
        raise ValueError("mu_kw needs an ad-valued 1-form")
    return bracket(g, sigma, sigma)


def mu_form_module(g: LieAlgebraData, sigma: FourierForm) -> FourierForm:
    """The quadratic map μ evaluated in the bimodule ΛT* ⊗ ad.

    μ(σ) = Σ_{μ,ν,a} ⟨c(e_μ)c(e_ν) [ξ_a, σ], σ⟩ (e^μ∧e^ν) ⊗ ξ_a, with the
    pointwise form inner product and the Lie pairing.
    """
    n = sigma.n
    out = FourierForm.zero(n, g.dim, sigma.N)
    for mu in range(n):
        for nu in range(n):
            if mu == nu:
                continue
            parts = []
            for a in range(g.dim):
                xa = FourierForm.constant(1, n, g.dim, sigma.N, comp=a)
                v = form_clifford(mu, form_clifford(nu, bracket(g, xa, sigma)))
                # pointwise inner product of forms, paired in the Lie algebra
                parts.append(_pointwise_inner(g, v, sigma))
            val = FourierForm.from_components(parts)
            out = out + wedge(FourierForm.dx(mu, nu, n=n, N=sigma.N), val, scalar_action_table(g.dim), g.dim)
    return out


def _pointwise_inner(g: LieAlgebraData, a: FourierForm, b: FourierForm) -> FourierForm:
    """Σ_I ⟨a_I, b_I⟩ as a scalar 0-form (all degrees)."""
    out = FourierForm.zero(a.n, 1, a.N)
    for k in sorted(a.degrees() | b.degrees()):
        ak, bk = a.degree_part(k), b.degree_part(k)
        if ak.is_zero() or bk.is_zero():
            continue
        out = out + hodge_star(wedge(ak, hodge_star(bk), g.pairing_table, 1))
    return out
