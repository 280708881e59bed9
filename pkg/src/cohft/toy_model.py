"""Zero-dimensional Mathai-Quillen model on N = S² (m = 1), in floating point.

Conventions.  At a point p of S² with an orthonormal frame (e_1, e_2) and
coframe (θ^1, θ^2), the Levi-Civita connection is A_12 = -cot(θ) θ^2 in the
spherical frame and the curvature is R_12 = K θ^1∧θ^2 with K = 1.  A vector
field is given by an ambient polynomial extension G: R³ → R³ that is tangent
on S², so ∇_v F = P(DG·v) with P the tangential projection.

The Euler form e(t) is a 2-form; its value at p is reported as the coefficient
of θ^1∧θ^2.  Both routes reduce to

    e(t) = (1/2π) exp(t|F|²/4) (K - (t/2) det ∇F).

Route (i) is the Gaussian integral over b, ∫d²b exp(-t|b|² - t⟨F,b⟩) =
(π/t) exp(t|F|²/4), continued analytically to t < 0, times the Berezin
integral over χ with ∫dχ χ_1χ_2 = 1, done in the exterior algebra of
(θ^1, θ^2, χ_1, χ_2) with float coefficients.  Route (ii) is the closed
Pfaffian formula with Pf(R)·R⁻¹ read as the adjugate of R.

numpy is used for vectorized quadrature and Gauss-Legendre nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .exact_core import GrassmannElement, berezin, exp_nilpotent

TWO_PI = 2 * math.pi

# ---------------------------------------------------------------------------
# surface model


@dataclass(frozen=True)
class SurfaceModel:
    """Unit S² with two spherical charts: polar axis e_z (chart 0) and e_x (chart 1)."""

    K: float = 1.0

    @staticmethod
    def axes(chart: int):
        """(axis, a, b): n = cosθ·axis + sinθ(cosφ·a + sinφ·b)."""
        ex, ey, ez = np.eye(3)
        return (ez, ex, ey) if chart == 0 else (ex, ey, ez)

    def point(self, theta, phi, chart: int = 0):
        u, a, b = self.axes(chart)
        return math.cos(theta) * u + math.sin(theta) * (math.cos(phi) * a + math.sin(phi) * b)

    def coords(self, n, chart: int = 0):
        u, a, b = self.axes(chart)
        theta = math.acos(max(-1.0, min(1.0, float(n @ u))))
        phi = math.atan2(float(n @ b), float(n @ a))
        return theta, phi

    @staticmethod
    def chart_for(n) -> int:
        return 0 if abs(n[2]) < 0.9 else 1

    def frame(self, n, chart: int | None = None, alpha: float = 0.0):
        """Orthonormal frame (e_1, e_2) = rotation by α of (e_θ, e_φ)."""
        chart = self.chart_for(n) if chart is None else chart
        u, a, b = self.axes(chart)
        th, ph = self.coords(n, chart)
        et = math.cos(th) * (math.cos(ph) * a + math.sin(ph) * b) - math.sin(th) * u
        ep = -math.sin(ph) * a + math.cos(ph) * b
        ca, sa = math.cos(alpha), math.sin(alpha)
        return ca * et + sa * ep, -sa * et + ca * ep

    def connection(self, n, chart: int | None = None):
        """A_12 in the coframe: (A_12(e_1), A_12(e_2)) for the unrotated spherical frame."""
        chart = self.chart_for(n) if chart is None else chart
        th, _ = self.coords(n, chart)
        return 0.0, -math.cos(th) / math.sin(th)

    def area(self, grid=(64, 128)) -> float:
        th, wt = polar_rule(grid[0])
        return float(np.sum(wt * np.sin(th)) * TWO_PI)


def tangent_projection(n):
    return np.eye(3) - np.outer(n, n)


# ---------------------------------------------------------------------------
# vector fields


@dataclass(frozen=True)
class VectorFieldModel:
    name: str
    G: Callable
    DG: Callable
    zeros: tuple = field(default_factory=tuple)   # ((point, expected degree), ...)
    isolated: bool = True

    def value(self, n):
        return np.asarray(self.G(n), dtype=float)

    def covariant(self, n):
        """∇F as an endomorphism of T_pS² in ambient coordinates."""
        P = tangent_projection(n)
        return P @ np.asarray(self.DG(n), dtype=float) @ P

    def frame_data(self, n, surface: SurfaceModel = SurfaceModel(), alpha: float = 0.0):
        """(F_a, M_ai = (∇_{e_i}F)_a) in the rotated frame."""
        e = surface.frame(n, alpha=alpha)
        F = np.array([ei @ self.value(n) for ei in e])
        D = self.covariant(n)
        M = np.array([[e[a] @ D @ e[i] for i in range(2)] for a in range(2)])
        return F, M


def _zero_G(n):
    return np.zeros(3)


def _zero_DG(n):
    return np.zeros((3, 3))


def _height_G(n):
    return np.array([0.0, 0.0, 1.0]) - n[2] * np.asarray(n)


def _height_DG(n):
    x, y, z = n
    return -np.array([[z, 0, x], [0, z, y], [0, 0, 2 * z]])


def _rot_G(n):
    x, y, _ = n
    return np.array([-y, x, 0.0])


def _rot_DG(n):
    return np.array([[0.0, -1, 0], [1, 0, 0], [0, 0, 0]])


def _dipole_G(n):
    x, y, z = n
    return np.array([1 - z - x * x, -x * y, x * (1 - z)])


def _dipole_DG(n):
    x, y, z = n
    return np.array([[-2 * x, 0, -1], [-y, -x, 0], [1 - z, 0, -x]])


NORTH = np.array([0.0, 0.0, 1.0])
SOUTH = -NORTH

VECTOR_FIELDS = {
    "zero": VectorFieldModel("zero", _zero_G, _zero_DG, (), isolated=False),
    "grad-height": VectorFieldModel("grad-height", _height_G, _height_DG, ((NORTH, 1), (SOUTH, 1))),
    "rotation": VectorFieldModel("rotation", _rot_G, _rot_DG, ((NORTH, 1), (SOUTH, 1))),
    # push-forward of ∂/∂Re(w) under inverse stereographic projection from the north pole
    "dipole": VectorFieldModel("dipole", _dipole_G, _dipole_DG, ((NORTH, 2),)),
}


def vector_field(vf) -> VectorFieldModel:
    if isinstance(vf, VectorFieldModel):
        return vf
    try:
        return VECTOR_FIELDS[vf]
    except KeyError:
        raise KeyError(f"unknown vector field {vf!r}; known: {sorted(VECTOR_FIELDS)}") from None


def _fields_vectorized(vf: VectorFieldModel, n):
    """|F|² and det ∇F on an array of points n (shape (..., 3))."""
    x, y, z = n[..., 0], n[..., 1], n[..., 2]
    if vf.name == "zero":
        return np.zeros_like(x), np.zeros_like(x)
    if vf.name == "grad-height":
        return 1 - z * z, z * z
    if vf.name == "rotation":
        return x * x + y * y, z * z
    if vf.name == "dipole":
        F = np.stack([1 - z - x * x, -x * y, x * (1 - z)], -1)
        D = np.stack([np.stack([-2 * x, 0 * x, -np.ones_like(x)], -1),
                      np.stack([-y, -x, 0 * x], -1),
                      np.stack([1 - z, 0 * x, -x], -1)], -2)
        return np.sum(F * F, -1), _tangent_det(n, D)
    pts = n.reshape(-1, 3)
    f2 = np.array([vf.value(p) @ vf.value(p) for p in pts]).reshape(x.shape)
    det = np.array([float(np.linalg.det(vf.frame_data(p)[1])) for p in pts]).reshape(x.shape)
    return f2, det


def _tangent_det(n, D):
    """det of P·D·P restricted to T_pS²."""
    # For a 3x3 D and unit n, det(PDP|_{T_p}) = n · cof(PDP) · n.
    P = np.eye(3) - n[..., :, None] * n[..., None, :]
    M = P @ D @ P
    cof = np.stack([np.cross(M[..., :, 1], M[..., :, 2]),
                    np.cross(M[..., :, 2], M[..., :, 0]),
                    np.cross(M[..., :, 0], M[..., :, 1])], -2)
    return np.einsum("...i,...ij,...j->...", n, cof, n)


# ---------------------------------------------------------------------------
# pointwise Euler form

PSI1, PSI2, CHI1, CHI2 = 1, 2, 3, 4
NGEN = 4


def _ge(terms):
    return GrassmannElement(terms, NGEN)


def mq_exponent(t, F, M, K=1.0) -> GrassmannElement:
    """-t(⟨χ,∇F⟩ - ⟨χ,Rχ⟩) with ∇F_a = M_a1 θ^1 + M_a2 θ^2 and R_12 = K θ^1θ^2."""
    terms = {}
    chis = (CHI1, CHI2)
    for a in range(2):
        for i, psi in enumerate((PSI1, PSI2)):
            c = -t * M[a][i]
            # χ_a θ^i written in increasing generator order: θ^i χ_a = -χ_a θ^i
            key = (psi, chis[a])
            terms[key] = terms.get(key, 0) - c
    # ⟨χ,Rχ⟩ = 2K θ^1θ^2 χ_1χ_2
    terms[(PSI1, PSI2, CHI1, CHI2)] = 2 * t * K
    return _ge(terms)


def berezin_chi(t, F, M, K=1.0):
    """∫dχ exp(-t(⟨χ,∇F⟩ - ⟨χ,Rχ⟩)) with ∫dχ χ_1χ_2 = 1, as a θ^1θ^2 coefficient."""
    ex = exp_nilpotent(mq_exponent(t, F, M, K))
    out = berezin(ex, [CHI2, CHI1])
    return out.terms.get((PSI1, PSI2), 0.0)


def berezin_chi_over_t(t, F, M, K=1.0):
    """The same integral divided by t, exactly.

    The exponent is t·X_1, so exp(tX_1) = 1 + tX_1 + t²X_1²/2 (X_1³ = 0 with
    four generators) and the integral is t·P_1 + t²·P_2.
    """
    X1 = mq_exponent(1.0, F, M, K)
    X2 = (X1 * X1).scale(Fraction(1, 2))
    if not (X2 * X1).is_zero():
        raise ArithmeticError("cubic term of the exponent does not vanish")
    P1 = berezin(X1, [CHI2, CHI1]).terms.get((PSI1, PSI2), 0.0)
    P2 = berezin(X2, [CHI2, CHI1]).terms.get((PSI1, PSI2), 0.0)
    return P1 + t * P2


def gaussian_b_times_t(t, F2):
    """t·∫d²b exp(-t|b|² - t⟨F,b⟩) = π exp(t|F|²/4), continued to t ≤ 0."""
    return math.pi * np.exp(t * F2 / 4)


def _ift(F, M, ift: bool):
    return (1j * np.asarray(F), 1j * np.asarray(M)) if ift else (np.asarray(F), np.asarray(M))


def euler_form_route_i(vf, t: float, point, alpha: float = 0.0, ift: bool = False,
                       surface: SurfaceModel = SurfaceModel()):
    vf = vector_field(vf)
    n = np.asarray(point, dtype=float)
    F, M = _ift(*vf.frame_data(n, surface, alpha), ift)
    F2 = complex(np.sum(F * F)) if ift else float(F @ F)
    # (π/t)·exp(t|F|²/4) times the χ-integral, with the 1/t cancelled exactly
    val = gaussian_b_times_t(t, F2) * berezin_chi_over_t(t, F, M, surface.K) / TWO_PI ** 2
    return _real(val)


def euler_form_route_ii(vf, t: float, point, alpha: float = 0.0, ift: bool = False,
                        surface: SurfaceModel = SurfaceModel()):
    """(1/2π) exp(t|F|²/4) [Pf(R) + (t/4)⟨∇F, Pf(R)R⁻¹ ∇F⟩]; the exponential truncates at first order."""
    vf = vector_field(vf)
    n = np.asarray(point, dtype=float)
    Rm = np.array([[0.0, surface.K], [-surface.K, 0.0]])
    if abs(np.linalg.det(Rm)) < 1e-300:
        raise ZeroDivisionError("R is singular; the closed Pfaffian formula is undefined")
    pf = surface.K
    adj = pf * np.linalg.inv(Rm)
    F, M = _ift(*vf.frame_data(n, surface, alpha), ift)
    F2 = np.sum(F * F)
    # ⟨B, X B⟩ for odd B_a = M_a1 θ^1 + M_a2 θ^2: B_aB_b = (M_a1 M_b2 - M_a2 M_b1) θ^1θ^2
    quad = sum(adj[a, b] * (M[a, 0] * M[b, 1] - M[a, 1] * M[b, 0]) for a in range(2) for b in range(2))
    val = np.exp(t * F2 / 4) * (pf + t / 4 * quad) / TWO_PI
    return _real(val)


def _real(v):
    v = complex(v)
    if abs(v.imag) > 1e-12 * max(1.0, abs(v.real)):
        raise ArithmeticError(f"Euler form has imaginary part {v.imag}")
    return v.real


def euler_form(vf, t: float, point, alpha: float = 0.0, ift: bool = False, tol: float = 1e-9) -> dict:
    """Coefficient of θ^1∧θ^2 by both routes; raises if they disagree beyond tol."""
    a = euler_form_route_i(vf, t, point, alpha, ift)
    try:
        b = euler_form_route_ii(vf, t, point, alpha, ift)
    except ZeroDivisionError:
        b = None
    if b is not None and abs(a - b) > tol * max(1.0, abs(a)):
        raise ArithmeticError(f"route (i) {a} and route (ii) {b} disagree")
    return {"value": a, "route_i": a, "route_ii": b}


def literal_chain(vf, t: float, point, surface: SurfaceModel = SurfaceModel()) -> dict:
    """The displayed chain with the displayed Gaussian prefactor (2π)²/det(𝒜)^{1/2}.

    With 𝒜 = 2t·1 on R², the displayed b-integral is (2π)²/(2t)·exp(t|F|²/4);
    the true one is (π/t)·exp(t|F|²/4).  Returns the ratio of the first line
    of the chain computed with the displayed formula to route (i), and the
    ratio of the chain's second line (prefactor 1/(4πt)) to route (i).
    """
    vf = vector_field(vf)
    n = np.asarray(point, dtype=float)
    F, M = vf.frame_data(n, surface)
    F2 = float(F @ F)
    ber = berezin_chi(t, F, M, surface.K)
    ref = euler_form_route_i(vf, t, n)
    first = (TWO_PI ** 2 / (2 * t)) * math.exp(t * F2 / 4) * ber / TWO_PI ** 2
    second = math.exp(t * F2 / 4) * ber / (4 * math.pi * t)
    return {"displayed_gaussian_ratio": first / ref, "second_line_ratio": second / ref}


def basicness(vf, t: float, point, alphas=(0.3, 1.1, 2.9), ift: bool = False) -> float:
    """Largest change of the extracted 2-form coefficient under frame rotations."""
    base = euler_form_route_i(vf, t, point, 0.0, ift)
    return max(abs(euler_form_route_i(vf, t, point, a, ift) - base) for a in alphas)


def connection_route_check(vf, point, surface: SurfaceModel = SurfaceModel(), h: float = 0.0) -> float:
    """|∇F (ambient projection) - (dF_a + A_ab F_b)| in the unrotated spherical frame.

    dF_a is computed from F_a(θ,φ) = e_a(θ,φ)·G(n(θ,φ)) by the chain rule.
    """
    vf = vector_field(vf)
    n = np.asarray(point, dtype=float)
    ch = surface.chart_for(n)
    u, a, b = surface.axes(ch)
    th, ph = surface.coords(n, ch)
    ct, st, cp, sp = math.cos(th), math.sin(th), math.cos(ph), math.sin(ph)
    rad = cp * a + sp * b
    et = ct * rad - st * u
    ep = -sp * a + cp * b
    dn = {"theta": et, "phi": st * ep}
    de = {("t", "theta"): -n, ("t", "phi"): ct * ep, ("p", "theta"): np.zeros(3), ("p", "phi"): -rad}
    G = vf.value(n)
    DG = np.asarray(vf.DG(n), dtype=float)
    Fa = {"t": et @ G, "p": ep @ G}
    e = {"t": et, "p": ep}
    # derivatives along the orthonormal frame: e_1 = ∂_θ, e_2 = (1/sinθ)∂_φ
    dF = np.zeros((2, 2))
    for i, (coord, scl) in enumerate((("theta", 1.0), ("phi", 1.0 / st))):
        for k, c in enumerate(("t", "p")):
            dF[k, i] = scl * (de[(c, coord)] @ G + e[c] @ DG @ dn[coord])
    A12 = np.array(surface.connection(n, ch))
    A = np.zeros((2, 2, 2))
    A[0, 1], A[1, 0] = A12, -A12
    via_conn = dF + np.einsum("abi,b->ai", A, np.array([Fa["t"], Fa["p"]]))
    _, M = vf.frame_data(n, surface)
    return float(np.max(np.abs(via_conn - M)))


# ---------------------------------------------------------------------------
# quadrature


def polar_rule(p: int, breaks=None):
    """Composite Gauss-Legendre nodes and weights in θ on [0, π].

    Without breakpoints this is a p-point rule; with them each panel gets p/4 nodes.
    """
    if breaks is None:
        breaks, per = [0.0, math.pi], p
    else:
        breaks, per = list(breaks), max(4, p // 4)
    x, w = np.polynomial.legendre.leggauss(per)
    ths, wts = [], []
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        ths.append((hi - lo) / 2 * x + (hi + lo) / 2)
        wts.append((hi - lo) / 2 * w)
    return np.concatenate(ths), np.concatenate(wts)


def graded_breaks(t: float):
    """Panel breakpoints refined geometrically toward both poles when |t| is large."""
    if abs(t) <= 100:
        return None
    tmin = 0.25 / math.sqrt(abs(t))
    inner = []
    x = tmin
    while x < 1.2:
        inner.append(x)
        x *= 3
    left = [0.0] + inner
    return left + [math.pi / 2] + [math.pi - y for y in reversed(inner)] + [math.pi]


def _integrate(vf: VectorFieldModel, t: float, p: int, a: int, ift: bool, K: float = 1.0) -> float:
    th, wt = polar_rule(p, graded_breaks(t))
    ph = np.arange(a) * (TWO_PI / a)
    T, P = np.meshgrid(th, ph, indexing="ij")
    n = np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], -1)
    f2, det = _fields_vectorized(vf, n)
    s = -1.0 if ift else 1.0
    dens = np.exp(s * t * f2 / 4) * (K - s * t / 2 * det) / TWO_PI
    rows = np.sum(dens, axis=1) * (TWO_PI / a)
    return float(np.sum(rows * wt * np.sin(th)))


def parse_grid(grid) -> tuple:
    if isinstance(grid, str):
        p, a = grid.lower().split("x")
        grid = (int(p), int(a))
    p, a = (int(v) for v in grid)
    if p < 4 or a < 4:
        raise ValueError(f"grid {p}x{a} is too coarse")
    return p, a


def euler_characteristic(vf, t: float, grid=(64, 128), ift: bool = False) -> dict:
    """∫_{S²} e(t) with a convergence estimate from halving and doubling the grid.

    ``estimate`` is |I(2g) - I(g)|; ``monotone`` says the successive
    differences at g/2, g, 2g shrink.
    """
    vf = vector_field(vf)
    p, a = parse_grid(grid)
    coarse = _integrate(vf, t, max(4, p // 2), max(4, a // 2), ift)
    val = _integrate(vf, t, p, a, ift)
    fine = _integrate(vf, t, 2 * p, 2 * a, ift)
    d1, d2 = abs(val - coarse), abs(fine - val)
    return {"t": t, "value": val, "estimate": d2, "monotone": d2 <= d1 or d2 < 1e-13,
            "grid": [p, a], "sequence": [coarse, val, fine]}


def ph_middle_expression(vf, t: float, grid=(64, 128)) -> float:
    """∫ Pf(R/2π) exp(t|F|²/4), the middle expression of the Poincaré-Hopf chain."""
    vf = vector_field(vf)
    p, a = parse_grid(grid)
    th, wt = polar_rule(p, graded_breaks(t))
    ph = np.arange(a) * (TWO_PI / a)
    T, P = np.meshgrid(th, ph, indexing="ij")
    n = np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], -1)
    f2, _ = _fields_vectorized(vf, n)
    rows = np.sum(np.exp(t * f2 / 4) / TWO_PI, axis=1) * (TWO_PI / a)
    return float(np.sum(rows * wt * np.sin(th)))


def t_sweep(vf, ts, grid=(64, 128), ift: bool = False) -> dict:
    rows = [euler_characteristic(vf, t, grid, ift) for t in ts]
    vals = [r["value"] for r in rows]
    return {"rows": rows, "spread": max(vals) - min(vals)}


# ---------------------------------------------------------------------------
# indices


def index_at(vf, zero, radius: float = 1e-2, samples: int = 720) -> int:
    """Winding number of F around a small circle about ``zero``."""
    vf = vector_field(vf)
    z = np.asarray(zero, dtype=float)
    helper = np.array([1.0, 0, 0]) if abs(z[0]) < 0.9 else np.array([0, 1.0, 0])
    u1 = helper - (helper @ z) * z
    u1 /= np.linalg.norm(u1)
    u2 = np.cross(z, u1)
    angs = []
    for k in range(samples + 1):
        s = TWO_PI * k / samples
        q = math.cos(radius) * z + math.sin(radius) * (math.cos(s) * u1 + math.sin(s) * u2)
        Fq = vf.value(q)
        c1, c2 = Fq @ u1, Fq @ u2
        if math.hypot(c1, c2) < 1e-14:
            raise ValueError(f"vector field vanishes on the sampling circle near {z}")
        angs.append(math.atan2(c2, c1))
    total = sum((math.remainder(b - a, TWO_PI)) for a, b in zip(angs[:-1], angs[1:]))
    return round(total / TWO_PI)


def index_sum(vf) -> int:
    vf = vector_field(vf)
    if not vf.isolated:
        raise ValueError(f"vector field {vf.name!r} has non-isolated zeros")
    for z, _ in vf.zeros:
        if np.linalg.norm(vf.value(z)) > 1e-12:
            raise ValueError(f"declared zero {z} of {vf.name!r} is not a zero")
    return sum(index_at(vf, z) for z, _ in vf.zeros)


# ---------------------------------------------------------------------------
# the exactness identity S̃_MQ = Q_J⟨χ,b⟩


def qj_identity_check(F, dF, a, dA, b) -> bool:
    """Q_J⟨χ,b⟩ against the displayed S̃_MQ at one point, exactly.

    F, b: frame components (numbers); dF: 2x2 matrix (dF_a)(e_i);
    a: (A_12(e_1), A_12(e_2)); dA: coefficient of θ^1θ^2 in dA_12.
    Generators: θ^1, θ^2, χ_1, χ_2.  In 2D, R = dA + A∧A = dA.
    """
    one = lambda c: _ge({(): c} if c else {})  # noqa: E731
    th = [_ge({(PSI1,): Fraction(1)}), _ge({(PSI2,): Fraction(1)})]
    chi = [_ge({(CHI1,): Fraction(1)}), _ge({(CHI2,): Fraction(1)})]
    A12 = th[0].scale(a[0]) + th[1].scale(a[1])
    A = [[one(0), A12], [-A12, one(0)]]
    vol = th[0] * th[1]
    R = [[one(0), vol.scale(dA)], [vol.scale(-dA), one(0)]]
    nF = [sum((th[i].scale(dF[k][i]) for i in range(2)), one(0)) + sum((A[k][m].scale(F[m]) for m in range(2)), one(0))
          for k in range(2)]

    def matvec(X, v):
        return [sum((X[k][m] * v[m] for m in range(2)), one(0)) for k in range(2)]

    Achi, Rchi = matvec(A, chi), matvec(R, chi)
    Ab = [sum((A[k][m].scale(b[m]) for m in range(2)), one(0)) for k in range(2)]
    Qchi = [one(b[k] + F[k]) - Achi[k] for k in range(2)]
    Qb = [-Ab[k] + Rchi[k] - nF[k] for k in range(2)]
    # Q_J odd: Q(χ_k b_k) = (Qχ_k) b_k - χ_k (Qb_k)
    lhs = sum((Qchi[k].scale(b[k]) - chi[k] * Qb[k] for k in range(2)), one(0))
    rhs = one(sum(x * x for x in b) + sum(F[k] * b[k] for k in range(2)))
    for k in range(2):
        rhs = rhs + chi[k] * nF[k]
    for k in range(2):
        rhs = rhs - chi[k] * Rchi[k]
    return (lhs - rhs).is_zero()


# ---------------------------------------------------------------------------
# projection form over Fr(S²) ≅ SO(3)


def aj_projection_check(t: float = 0.0, grid=(24, 32, 16), vf="zero", ift: bool = True) -> dict:
    """Both sides of ∫_{Fr(N)} e∧γ = ∫_N e with Euler-angle quadrature on SO(3).

    g = R_z(α) R_y(β) R_z(γ) is the frame (g e_x, g e_y) at π(g) = g e_z.  The
    fibre coordinate is γ; the fundamental field of so(2) is ∂_γ with
    C*C = 1 for the bi-invariant metric normalized so that C(1) has unit length.
    On horizontal vectors R - dC*/C*C vanishes for the Levi-Civita connection,
    so the delta factor is evaluated at zero and γ reduces to the normalized
    fibre form C*/(2π·C*C); its integral over each fibre is checked.
    For t > 0 the iℱ mode is used by default.
    """
    vf = vector_field(vf)
    nb, na, ng = grid
    bet, wb = np.polynomial.legendre.leggauss(nb)
    bet = (bet + 1) * math.pi / 2
    wb = wb * math.pi / 2
    alps = np.arange(na) * TWO_PI / na
    Cstar = np.ones(ng)
    CC = 1.0
    fibre = np.sum(Cstar / (TWO_PI * CC)) * TWO_PI / ng
    lhs = 0.0
    for B, W in zip(bet, wb):
        for Al in alps:
            n = np.array([math.sin(B) * math.cos(Al), math.sin(B) * math.sin(Al), math.cos(B)])
            if vf.name == "zero" or t == 0:
                e = 1.0 / TWO_PI
            else:
                e = euler_form_route_i(vf, t, n, ift=ift and t > 0)
            vert = np.sum(Cstar / (TWO_PI * CC)) * TWO_PI / ng
            lhs += e * math.sin(B) * W * (TWO_PI / na) * vert
    rhs = euler_characteristic(vf, t, (max(8, nb), max(8, na)), ift=ift and t > 0)["value"]
    ok = abs(lhs - rhs) <= 0.05 * abs(rhs) and abs(fibre - 1) < 1e-12
    return {"t": t, "lhs": lhs, "rhs": rhs, "fibre_volume": fibre, "agree": ok}
