"""Exact exterior calculus on the flat unit-volume torus.

A :class:`FourierForm` is a finite sum of terms

    c · ε_G · e_k · dx^I · v_a

with ``c`` a Gaussian rational, ``ε_G`` a Grassmann monomial, ``e_k`` the
Fourier mode of integer frequency ``k`` (``d e_k = i Σ k_μ dx^μ e_k``, so 2π is
absorbed into the frequency), ``dx^I`` a basis form and ``v_a`` the a-th basis
vector of the value space (Lie algebra, spinor module, or scalars).

Grassmann generators commute with the basis forms: signs are bigraded, with
odd ghost number and odd form degree tracked separately.  Terms are stored in
a flat dict keyed by ``(freq_code, form_mask, grassmann_mask, component)``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .exact_core import ExactScalar, GrassmannElement

__all__ = [
    "FourierForm",
    "encode_freq",
    "decode_freq",
    "mask_sign",
    "wedge",
    "exterior_d",
    "hodge_star",
    "sd_project",
    "codifferential",
    "integrate",
    "inner_density",
    "interior",
    "SCALAR_PRODUCT",
    "diagonal_pairing",
]

FREQ_BASE = 1 << 10
_HALF = FREQ_BASE // 2

ZERO = ExactScalar(0)
ONE = ExactScalar(1)
I_UNIT = ExactScalar(0, 1)


def encode_freq(k: Sequence[int]) -> int:
    """Pack an integer frequency vector into one int; packing is additive."""
    code = 0
    mult = 1
    for x in k:
        if not -_HALF < x < _HALF:
            raise ValueError(f"frequency component {x} out of range")
        code += x * mult
        mult *= FREQ_BASE
    return code


@lru_cache(maxsize=None)
def decode_freq(code: int, n: int = 4) -> tuple:
    out = []
    for _ in range(n):
        r = code % FREQ_BASE
        if r >= _HALF:
            r -= FREQ_BASE
        out.append(r)
        code = (code - r) // FREQ_BASE
    if code:
        raise ValueError("frequency code does not fit the dimension")
    return tuple(out)


@lru_cache(maxsize=None)
def mask_sign(a: int, b: int) -> int:
    """Sign from sorting the ordered product of two monomials given as bit masks.

    0 if the masks overlap.
    """
    if a & b:
        return 0
    inv = 0
    bb = b
    while bb:
        low = bb & -bb
        y = low.bit_length() - 1
        inv += bin(a >> (y + 1)).count("1")
        bb ^= low
    return -1 if inv & 1 else 1


def _mask(idx: Iterable[int]) -> int:
    m = 0
    for i in idx:
        if m >> i & 1:
            raise ValueError(f"repeated index {i}")
        m |= 1 << i
    return m


def _mask_tuple(m: int) -> tuple:
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


def _popcount(m: int) -> int:
    return bin(m).count("1")


class FourierForm:
    """Matrix-valued differential form on Tⁿ with finite Fourier support.

    ``m`` is the dimension of the value space; ``N`` the Grassmann budget.
    Form indices are 0-based (``dx^{μ+1}`` has index μ).
    """

    __slots__ = ("terms", "n", "m", "N")

    def __init__(self, terms: Mapping | None = None, n: int = 4, m: int = 1, N: int = 8):
        self.n = n
        self.m = m
        self.N = N
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    # construction ---------------------------------------------------------
    def _new(self, terms: dict, m: int | None = None) -> "FourierForm":
        f = object.__new__(FourierForm)
        f.n = self.n
        f.m = self.m if m is None else m
        f.N = self.N
        f.terms = terms
        return f

    @classmethod
    def zero(cls, n: int = 4, m: int = 1, N: int = 8) -> "FourierForm":
        return cls({}, n, m, N)

    @classmethod
    def mode(cls, freq: Sequence[int] = None, idx: Sequence[int] = (), comp: int = 0,
             coeff=1, grassmann: Sequence[int] = (), n: int = 4, m: int = 1, N: int = 8):
        """Single term c·ε_G·e_k·dx^I·v_comp (Grassmann indices are 1-based)."""
        if freq is None:
            freq = (0,) * n
        if len(freq) != n:
            raise ValueError("frequency vector has wrong length")
        if any(i < 0 or i >= n for i in idx):
            raise ValueError("form index out of range")
        fs = 1
        fm = 0
        for i in idx:
            fs *= mask_sign(fm, 1 << i)
            fm |= 1 << i
        gs = 1
        gm = 0
        for g in grassmann:
            if not 1 <= g <= N:
                raise ValueError("Grassmann index out of range")
            gs *= mask_sign(gm, 1 << (g - 1))
            gm |= 1 << (g - 1)
        c = ExactScalar.coerce(coeff) * (fs * gs)
        if not 0 <= comp < m:
            raise ValueError("component out of range")
        return cls({(encode_freq(freq), fm, gm, comp): c}, n, m, N)

    @classmethod
    def constant(cls, coeff=1, n: int = 4, m: int = 1, N: int = 8, comp: int = 0):
        return cls.mode(None, (), comp, coeff, (), n, m, N)

    @classmethod
    def dx(cls, *idx: int, n: int = 4, m: int = 1, N: int = 8):
        return cls.mode(None, idx, 0, 1, (), n, m, N)

    @classmethod
    def vol(cls, n: int = 4, N: int = 8):
        return cls.dx(*range(n), n=n, N=N)

    def like(self, terms: dict | None = None, m: int | None = None) -> "FourierForm":
        return self._new(dict(terms or {}), m)

    # linear structure -----------------------------------------------------
    def _compat(self, o: "FourierForm"):
        if self.n != o.n or self.m != o.m or self.N != o.N:
            raise ValueError(
                f"incompatible forms: (n,m,N)=({self.n},{self.m},{self.N}) vs ({o.n},{o.m},{o.N})")

    def __add__(self, o: "FourierForm") -> "FourierForm":
        if isinstance(o, int) and o == 0:
            return self
        self._compat(o)
        t = dict(self.terms)
        for k, v in o.terms.items():
            if k in t:
                s = t[k] + v
                if s:
                    t[k] = s
                else:
                    del t[k]
            else:
                t[k] = v
        return self._new(t)

    __radd__ = __add__

    def __neg__(self) -> "FourierForm":
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, o: "FourierForm") -> "FourierForm":
        return self + (-o)

    def scale(self, c) -> "FourierForm":
        c = ExactScalar.coerce(c)
        if not c:
            return self._new({})
        return self._new({k: v * c for k, v in self.terms.items()})

    def __mul__(self, c):
        if isinstance(c, FourierForm):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, o):
        if not isinstance(o, FourierForm):
            return NotImplemented
        return self.n == o.n and self.m == o.m and (self - o).is_zero()

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    # inspection -----------------------------------------------------------
    def degrees(self) -> set:
        return {_popcount(k[1]) for k in self.terms}

    @property
    def degree(self) -> int | None:
        d = self.degrees()
        if not d:
            return None
        if len(d) == 1:
            return next(iter(d))
        return None

    def grassmann_parities(self) -> set:
        return {_popcount(k[2]) & 1 for k in self.terms}

    def max_frequency(self) -> int:
        return max((max(map(abs, decode_freq(k[0], self.n)), default=0) for k in self.terms), default=0)

    def items(self):
        """Yield (freq tuple, form index tuple, grassmann tuple (1-based), comp, coeff)."""
        for (f, fm, gm, c), v in self.terms.items():
            yield (decode_freq(f, self.n), _mask_tuple(fm), tuple(i + 1 for i in _mask_tuple(gm)), c, v)

    def coefficient(self, freq, idx, comp=0) -> GrassmannElement:
        """Grassmann-valued coefficient of e_k dx^I v_comp (idx sorted)."""
        code = encode_freq(freq)
        fm = _mask(idx)
        out = {}
        for (f, m_, gm, c), v in self.terms.items():
            if f == code and m_ == fm and c == comp:
                out[tuple(i + 1 for i in _mask_tuple(gm))] = v
        return GrassmannElement(out, self.N)

    def degree_part(self, k: int) -> "FourierForm":
        return self._new({key: v for key, v in self.terms.items() if _popcount(key[1]) == k})

    def grassmann_degree_part(self, k: int) -> "FourierForm":
        return self._new({key: v for key, v in self.terms.items() if _popcount(key[2]) == k})

    def component(self, a: int) -> "FourierForm":
        return self._new({(f, fm, gm, 0): v for (f, fm, gm, c), v in self.terms.items() if c == a}, m=1)

    @staticmethod
    def from_components(parts: Sequence["FourierForm"]) -> "FourierForm":
        m = len(parts)
        base = parts[0]
        t = {}
        for a, p in enumerate(parts):
            for (f, fm, gm, _), v in p.terms.items():
                t[(f, fm, gm, a)] = v
        return base._new(t, m)

    def conj(self) -> "FourierForm":
        """Pointwise complex conjugate (Grassmann generators are real)."""
        return self._new({(-f, fm, gm, c): v.conj() for (f, fm, gm, c), v in self.terms.items()})

    def real_part(self) -> "FourierForm":
        return (self + self.conj()).scale(ExactScalar(1, 0) / 2)

    def imag_part(self) -> "FourierForm":
        return (self - self.conj()).scale(ExactScalar(0, -1) / 2)

    def map_components(self, matrix: Sequence[Sequence], m_out: int | None = None) -> "FourierForm":
        """Apply a constant linear map v_a ↦ Σ_b matrix[b][a] v_b on values."""
        m_out = len(matrix) if m_out is None else m_out
        cols = {}
        for b, row in enumerate(matrix):
            for a, x in enumerate(row):
                x = ExactScalar.coerce(x)
                if x:
                    cols.setdefault(a, []).append((b, x))
        out: dict = {}
        for (f, fm, gm, a), v in self.terms.items():
            for b, x in cols.get(a, ()):
                key = (f, fm, gm, b)
                w = v * x
                if key in out:
                    w = out[key] + w
                    if w:
                        out[key] = w
                    else:
                        del out[key]
                else:
                    out[key] = w
        return self._new(out, m_out)

    def grassmann_mul(self, g: GrassmannElement, left: bool = True) -> "FourierForm":
        """Multiply by a constant Grassmann element from the left or right."""
        out: dict = {}
        for gk, gv in g.terms.items():
            gmask = _mask(i - 1 for i in gk)
            gv = ExactScalar.coerce(gv)
            for (f, fm, gm, c), v in self.terms.items():
                s = mask_sign(gmask, gm) if left else mask_sign(gm, gmask)
                if not s:
                    continue
                key = (f, fm, gm | gmask, c)
                w = v * gv if s > 0 else -(v * gv)
                _acc(out, key, w)
        return self._new(out)

    def __repr__(self):
        if not self.terms:
            return "FourierForm(0)"
        parts = []
        for freq, idx, g, c, v in sorted(self.items(), key=lambda t: (t[1], t[0], t[2], t[3])):
            mono = "".join(f"e{i}" for i in g)
            form = "dx" + "".join(str(i + 1) for i in idx) if idx else ""
            parts.append(f"({v}){mono}·e{list(freq)}{form}[{c}]")
        return " + ".join(parts)


def _acc(out: dict, key, w):
    if key in out:
        w = out[key] + w
        if w:
            out[key] = w
        else:
            del out[key]
    elif w:
        out[key] = w


# ---------------------------------------------------------------------------
# bilinear products

# table: dict (i, j) -> list of (k, ExactScalar coefficient)
SCALAR_PRODUCT = {(0, 0): ((0, ONE),)}


def diagonal_pairing(m: int) -> dict:
    return {(a, a): ((0, ONE),) for a in range(m)}


def wedge(alpha: FourierForm, beta: FourierForm, table: Mapping | None = None,
          m_out: int | None = None, zero_mode_only: bool = False) -> FourierForm:
    """α ∧ β with values combined by the bilinear ``table``.

    ``table[(i, j)]`` lists ``(k, c)`` so that ``v_i ⊗ v_j ↦ Σ c v_k``.  The
    default multiplies scalar-valued forms.  With ``zero_mode_only`` only the
    frequency-zero part of the product is computed.
    """
    if alpha.n != beta.n or alpha.N != beta.N:
        raise ValueError("wedge of forms on different tori or Grassmann budgets")
    if table is None:
        if alpha.m != 1 or beta.m != 1:
            raise ValueError("a value pairing table is needed for non-scalar forms")
        table = SCALAR_PRODUCT
        m_out = 1
    if m_out is None:
        m_out = 1 + max((k for outs in table.values() for k, _ in outs), default=0)
    out: dict = {}
    bterms = beta.terms
    if zero_mode_only:
        byfreq: dict = {}
        for key, v in bterms.items():
            byfreq.setdefault(key[0], []).append((key, v))
        for (fa, ma, ga, ca), va in alpha.terms.items():
            for (fb, mb, gb, cb), vb in byfreq.get(-fa, ()):
                outs = table.get((ca, cb))
                if not outs or (ma & mb) or (ga & gb):
                    continue
                s = mask_sign(ma, mb) * mask_sign(ga, gb)
                p = va * vb
                if s < 0:
                    p = -p
                for k, c in outs:
                    _acc(out, (0, ma | mb, ga | gb, k), p * c)
        return _mk(alpha, out, m_out)
    for (fa, ma, ga, ca), va in alpha.terms.items():
        for (fb, mb, gb, cb), vb in bterms.items():
            if (ma & mb) or (ga & gb):
                continue
            outs = table.get((ca, cb))
            if not outs:
                continue
            s = mask_sign(ma, mb) * mask_sign(ga, gb)
            p = va * vb
            if s < 0:
                p = -p
            key0 = fa + fb
            mm = ma | mb
            gg = ga | gb
            for k, c in outs:
                _acc(out, (key0, mm, gg, k), p * c)
    return _mk(alpha, out, m_out)


def _mk(proto: FourierForm, terms: dict, m: int) -> FourierForm:
    f = object.__new__(FourierForm)
    f.n = proto.n
    f.m = m
    f.N = proto.N
    f.terms = terms
    return f


# ---------------------------------------------------------------------------
# differential operators


def exterior_d(alpha: FourierForm) -> FourierForm:
    """d(c e_k dx^I) = i Σ_μ k_μ c e_k dx^μ ∧ dx^I."""
    out: dict = {}
    n = alpha.n
    for (f, fm, gm, c), v in alpha.terms.items():
        if not f:
            continue
        k = decode_freq(f, n)
        iv = v * I_UNIT
        for mu in range(n):
            if not k[mu] or fm >> mu & 1:
                continue
            s = mask_sign(1 << mu, fm)
            _acc(out, (f, fm | (1 << mu), gm, c), iv * (s * k[mu]))
    return alpha._new(out)


def partial(alpha: FourierForm, mu: int) -> FourierForm:
    """Coefficient-wise derivative ∂_μ."""
    out = {}
    n = alpha.n
    for (f, fm, gm, c), v in alpha.terms.items():
        k = decode_freq(f, n)[mu]
        if k:
            out[(f, fm, gm, c)] = v * I_UNIT * k
    return alpha._new(out)


@lru_cache(maxsize=None)
def _star_data(fm: int, n: int) -> tuple:
    full = (1 << n) - 1
    comp = full ^ fm
    return comp, mask_sign(fm, comp)


def hodge_star(alpha: FourierForm) -> FourierForm:
    """⋆dx^I = sign(I, I^c) dx^{I^c} for the flat metric and orientation dx¹…dxⁿ."""
    out = {}
    n = alpha.n
    for (f, fm, gm, c), v in alpha.terms.items():
        comp, s = _star_data(fm, n)
        out[(f, comp, gm, c)] = v if s > 0 else -v
    return alpha._new(out)


def sd_project(alpha: FourierForm, sign: int = +1) -> FourierForm:
    """α_± = ½(α ± ⋆α) for 2-forms in dimension 4."""
    if alpha.n != 4:
        raise ValueError("self-dual projection needs n = 4")
    if alpha.terms and alpha.degrees() != {2}:
        raise ValueError(f"self-dual projection needs a 2-form, got degrees {sorted(alpha.degrees())}")
    st = hodge_star(alpha)
    s = st if sign > 0 else -st
    return (alpha + s).scale(ExactScalar(1, 0) / 2)


def codifferential(alpha: FourierForm) -> FourierForm:
    """d* = (-1)^{n(k+1)+1} ⋆d⋆ on k-forms (= -⋆d⋆ in dimension 4)."""
    n = alpha.n
    out = alpha._new({})
    for k in sorted(alpha.degrees()):
        part = alpha.degree_part(k)
        t = hodge_star(exterior_d(hodge_star(part)))
        if (n * (k + 1) + 1) % 2:
            t = -t
        out = out + t
    return out


def interior(alpha: FourierForm, mu: int) -> FourierForm:
    """Contraction ι_{∂_μ} from the left."""
    out = {}
    bit = 1 << mu
    for (f, fm, gm, c), v in alpha.terms.items():
        if fm & bit:
            s = mask_sign(bit, fm ^ bit)
            out[(f, fm ^ bit, gm, c)] = v if s > 0 else -v
    return alpha._new(out)


def integrate(alpha: FourierForm, strict: bool = True):
    """∫_{Tⁿ} α: the zero-mode top-degree coefficient.

    Returns a list of Grassmann elements (one per value component) or, for
    scalar-valued forms, a single Grassmann element.
    """
    n = alpha.n
    full = (1 << n) - 1
    if strict and alpha.terms and alpha.degrees() != {n}:
        raise ValueError(f"integrand must be a top form, got degrees {sorted(alpha.degrees())}")
    comps = [dict() for _ in range(alpha.m)]
    for (f, fm, gm, c), v in alpha.terms.items():
        if f == 0 and fm == full:
            comps[c][tuple(i + 1 for i in _mask_tuple(gm))] = v
    vals = [GrassmannElement(d, alpha.N) for d in comps]
    return vals[0] if alpha.m == 1 else vals


def inner_density(alpha: FourierForm, beta: FourierForm, pairing: Mapping | str = "diag",
                  zero_mode_only: bool = False) -> FourierForm:
    """⟨α, β⟩ vol := pairing(α ∧ ⋆β).

    ``pairing`` is a bilinear value table, ``"diag"`` for the orthonormal
    real pairing, or ``"herm"`` for the real part of the Hermitian pairing
    Σ conj(α_a) β_a.
    """
    if alpha.m != beta.m:
        raise ValueError(f"slot mismatch: {alpha.m} vs {beta.m}")
    da, db = alpha.degrees(), beta.degrees()
    if da and db and da != db:
        raise ValueError(f"form degrees differ: {sorted(da)} vs {sorted(db)}")
    if pairing == "herm":
        p = wedge(alpha.conj(), hodge_star(beta), diagonal_pairing(alpha.m), 1)
        if zero_mode_only:
            p = p._new({k: v for k, v in p.terms.items() if k[0] == 0})
        return p.real_part()
    table = diagonal_pairing(alpha.m) if pairing == "diag" else pairing
    return wedge(alpha, hodge_star(beta), table, 1, zero_mode_only=zero_mode_only)
