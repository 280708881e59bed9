"""Exact coefficient arithmetic.

Gaussian rationals, finite Grassmann algebras over an arbitrary commutative
coefficient ring, Berezin integration, Pfaffians and exponentials of
nilpotent elements.  Everything here is generic over the coefficient ring:
exact clients use :class:`ExactScalar`, the toy model uses plain floats.

Berezin convention: ``berezin(e, [i1, ..., ik])`` is the iterated integral
``∫dε_i1 ... dε_ik e`` where the innermost measure acts first as a left
derivative.  In particular ``∫dε1 dε2 ε2 ε1 = 1``.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Any, Callable, Sequence

from gmpy2 import mpq

__all__ = [
    "ExactScalar",
    "GrassmannElement",
    "AntisymMatrix",
    "grassmann_mul",
    "berezin",
    "pfaffian",
    "determinant",
    "matrix_inverse",
    "exp_nilpotent",
    "odd_gaussian_integral",
    "GaussianIntegralResult",
    "NonTerminatingSeries",
]


def _q(x) -> mpq:
    if isinstance(x, mpq):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, (int, Rational)):
        return mpq(x)
    if isinstance(x, str):
        return mpq(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class ExactScalar:
    """Gaussian rational ``re + i*im`` with arbitrary-precision parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _q(re)
        self.im = _q(im)

    @classmethod
    def _raw(cls, re: mpq, im: mpq) -> "ExactScalar":
        s = object.__new__(cls)
        s.re = re
        s.im = im
        return s

    @classmethod
    def coerce(cls, x) -> "ExactScalar":
        if isinstance(x, ExactScalar):
            return x
        if isinstance(x, complex):
            raise TypeError("floating-point complex values are not exact")
        return cls(x)

    # arithmetic -----------------------------------------------------------
    def __add__(self, o):
        if not isinstance(o, ExactScalar):
            try:
                o = ExactScalar.coerce(o)
            except TypeError:
                return NotImplemented
        return ExactScalar._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        if not isinstance(o, ExactScalar):
            try:
                o = ExactScalar.coerce(o)
            except TypeError:
                return NotImplemented
        return ExactScalar._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return ExactScalar.coerce(o) - self

    def __neg__(self):
        return ExactScalar._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, o):
        if not isinstance(o, ExactScalar):
            try:
                o = ExactScalar.coerce(o)
            except TypeError:
                return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return ExactScalar._raw(a * c, b)
        return ExactScalar._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = ExactScalar.coerce(o)
        n = o.re * o.re + o.im * o.im
        if not n:
            raise ZeroDivisionError("division by zero Gaussian rational")
        a, b = self.re, self.im
        return ExactScalar._raw((a * o.re + b * o.im) / n, (b * o.re - a * o.im) / n)

    def __rtruediv__(self, o):
        return ExactScalar.coerce(o) / self

    def __pow__(self, k: int):
        if k < 0:
            return ExactScalar(1) / (self ** (-k))
        out = ExactScalar(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "ExactScalar":
        return ExactScalar._raw(self.re, -self.im)

    def inverse(self) -> "ExactScalar":
        return ExactScalar(1) / self

    # comparisons ----------------------------------------------------------
    def __eq__(self, o):
        if isinstance(o, ExactScalar):
            return self.re == o.re and self.im == o.im
        if isinstance(o, (int, Fraction, Rational)) or type(o) is type(self.re):
            return self.im == 0 and self.re == _q(o)
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(Fraction(int(self.re.numerator), int(self.re.denominator)))
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ExactScalar({self})"

    def __str__(self):
        def fmt(q):
            return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"

        if not self.im:
            return fmt(self.re)
        if not self.re:
            return f"{fmt(self.im)}i"
        sign = "+" if self.im > 0 else "-"
        return f"{fmt(self.re)}{sign}{fmt(abs(self.im))}i"

    def to_json(self):
        return [str(self.re), str(self.im)]


I = ExactScalar(0, 1)


# ---------------------------------------------------------------------------
# Grassmann algebra


def merge_sign(a: Sequence[int], b: Sequence[int]) -> int:
    """Sign of the permutation sorting the concatenation ``a + b``.

    Returns 0 if the two index sets overlap.
    """
    inv = 0
    j = 0
    nb = len(b)
    for x in a:
        while j < nb and b[j] < x:
            j += 1
        if j < nb and b[j] == x:
            return 0
        inv += j
    return -1 if inv & 1 else 1


def _is_zero(c) -> bool:
    return c == 0


class GrassmannElement:
    """Element of the exterior algebra on generators ε_1..ε_N over a ring.

    ``terms`` maps strictly increasing index tuples to nonzero coefficients.
    """

    __slots__ = ("terms", "n")

    def __init__(self, terms: dict | None = None, n: int = 8):
        self.n = n
        clean = {}
        if terms:
            for k, v in terms.items():
                k = tuple(k)
                if any(i < 1 or i > n for i in k):
                    raise ValueError(f"generator index out of range 1..{n}: {k}")
                if list(k) != sorted(set(k)):
                    raise ValueError(f"index tuple must be strictly increasing: {k}")
                if not _is_zero(v):
                    clean[k] = v
        self.terms = clean

    @classmethod
    def scalar(cls, c, n: int = 8) -> "GrassmannElement":
        return cls({(): c}, n)

    @classmethod
    def generator(cls, i: int, n: int = 8, coeff=1) -> "GrassmannElement":
        return cls({(i,): coeff}, n)

    def _new(self, terms: dict) -> "GrassmannElement":
        g = object.__new__(GrassmannElement)
        g.n = self.n
        g.terms = terms
        return g

    def _check(self, o: "GrassmannElement"):
        if o.n != self.n:
            raise ValueError(f"mismatched generator budgets: {self.n} vs {o.n}")

    def _lift(self, o):
        if isinstance(o, GrassmannElement):
            self._check(o)
            return o
        return self._new({(): o} if not _is_zero(o) else {})

    def __add__(self, o):
        o = self._lift(o)
        t = dict(self.terms)
        for k, v in o.terms.items():
            s = t[k] + v if k in t else v
            if _is_zero(s):
                t.pop(k, None)
            else:
                t[k] = s
        return self._new(t)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        if isinstance(o, GrassmannElement):
            return grassmann_mul(self, o)
        if _is_zero(o):
            return self._new({})
        return self._new({k: v * o for k, v in self.terms.items() if not _is_zero(v * o)})

    def __rmul__(self, o):
        if _is_zero(o):
            return self._new({})
        return self._new({k: o * v for k, v in self.terms.items() if not _is_zero(o * v)})

    def scale(self, c) -> "GrassmannElement":
        return self * c

    def one(self) -> "GrassmannElement":
        return self._new({(): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, o):
        if isinstance(o, GrassmannElement):
            return self.n == o.n and (self - o).is_zero()
        return (self - self._lift(o)).is_zero()

    __hash__ = None

    def body(self):
        return self.terms.get((), 0)

    def is_even(self) -> bool:
        return all(len(k) % 2 == 0 for k in self.terms)

    def is_odd(self) -> bool:
        return all(len(k) % 2 == 1 for k in self.terms)

    def parity(self) -> int | None:
        if self.is_even():
            return 0
        if self.is_odd():
            return 1
        return None

    def left_derivative(self, i: int) -> "GrassmannElement":
        """∂/∂ε_i acting from the left."""
        out = {}
        for k, v in self.terms.items():
            if i in k:
                pos = k.index(i)
                rest = k[:pos] + k[pos + 1:]
                out[rest] = -v if pos % 2 else v
        return self._new(out)

    def map_coeffs(self, f: Callable[[Any], Any]) -> "GrassmannElement":
        return self._new({k: f(v) for k, v in self.terms.items() if not _is_zero(f(v))})

    def inverse(self) -> "GrassmannElement":
        """Inverse of an element with invertible even body."""
        b = self.body()
        if _is_zero(b):
            raise ZeroDivisionError("Grassmann element with zero body is not invertible")
        binv = 1 / b
        nil = self * binv - self.one()
        out = self.one()
        term = self.one()
        for _ in range(self.n + 1):
            term = -(term * nil)
            if term.is_zero():
                return out * binv
            out = out + term
        raise NonTerminatingSeries("nilpotent part did not vanish within the generator budget")

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=lambda t: (len(t), t)):
            mono = "".join(f"e{i}" for i in k) or "1"
            parts.append(f"({self.terms[k]})*{mono}")
        return " + ".join(parts)


def grassmann_mul(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    """Product in the exterior algebra with the merge-permutation sign."""
    if a.n != b.n:
        raise ValueError(f"mismatched generator budgets: {a.n} vs {b.n}")
    out: dict = {}
    for ka, va in a.terms.items():
        for kb, vb in b.terms.items():
            s = merge_sign(ka, kb)
            if not s:
                continue
            k = tuple(sorted(ka + kb))
            v = va * vb
            if s < 0:
                v = -v
            if k in out:
                v = out[k] + v
            if _is_zero(v):
                out.pop(k, None)
            else:
                out[k] = v
    return a._new(out)


def berezin(e: GrassmannElement, over: Sequence[int]) -> GrassmannElement:
    """Iterated Berezin integral ``∫dε_{over[0]} ... dε_{over[-1]} e``."""
    over = list(over)
    if len(set(over)) != len(over):
        raise ValueError(f"repeated generator in Berezin measure: {over}")
    for i in over:
        if i < 1 or i > e.n:
            raise ValueError(f"generator {i} outside 1..{e.n}")
    out = e
    for i in reversed(over):
        out = out.left_derivative(i)
    return out


# ---------------------------------------------------------------------------
# matrices over a commutative ring


class AntisymMatrix:
    """Even-dimensional antisymmetric square matrix over a commutative ring."""

    __slots__ = ("entries", "dim")

    def __init__(self, entries: Sequence[Sequence[Any]], check: bool = True):
        rows = [list(r) for r in entries]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        if check:
            for i in range(n):
                if not _is_zero(rows[i][i]):
                    raise ValueError("antisymmetric matrix must have zero diagonal")
                for j in range(i + 1, n):
                    if not _is_zero(rows[i][j] + rows[j][i]):
                        raise ValueError(f"entries ({i},{j}) and ({j},{i}) are not opposite")
        self.entries = rows
        self.dim = n

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]


def _entries(A) -> list[list[Any]]:
    if isinstance(A, AntisymMatrix):
        return A.entries
    return [list(r) for r in A]


def pfaffian(A, one=1):
    """Pfaffian by recursive expansion along the first row."""
    M = _entries(A)
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("matrix must be square")
    if n % 2:
        raise ValueError(f"Pfaffian needs even dimension, got {n}")
    if not isinstance(A, AntisymMatrix):
        AntisymMatrix(M)  # validates antisymmetry
    return _pf(M, tuple(range(n)), one)


def _pf(M, idx: tuple, one):
    if not idx:
        return one
    i0 = idx[0]
    rest = idx[1:]
    total = None
    for pos, j in enumerate(rest):
        a = M[i0][j]
        if _is_zero(a):
            continue
        sub = rest[:pos] + rest[pos + 1:]
        term = a * _pf(M, sub, one)
        if pos % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return one * 0
    return total


def _inv_scalar(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(1) / x
    if hasattr(x, "inverse"):
        return x.inverse()
    return 1 / x


def _invertible(x) -> bool:
    if isinstance(x, GrassmannElement):
        return not _is_zero(x.body())
    return not _is_zero(x)


def determinant(A, one=1):
    """Determinant by Gaussian elimination with pivoting."""
    M = [list(r) for r in _entries(A)]
    n = len(M)
    det = one
    for c in range(n):
        p = next((r for r in range(c, n) if _invertible(M[r][c])), None)
        if p is None:
            return one * 0
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        piv = M[c][c]
        det = det * piv
        inv = _inv_scalar(piv)
        for r in range(c + 1, n):
            f = M[r][c] * inv
            if _is_zero(f):
                continue
            M[r] = [M[r][k] - f * M[c][k] for k in range(n)]
    return det


def matrix_inverse(A, one=1):
    """Gauss-Jordan inverse; pivots must have invertible body."""
    M = [list(r) for r in _entries(A)]
    n = len(M)
    zero = one * 0
    Inv = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if _invertible(M[r][c])), None)
        if p is None:
            raise ZeroDivisionError("matrix is singular")
        M[c], M[p] = M[p], M[c]
        Inv[c], Inv[p] = Inv[p], Inv[c]
        inv = _inv_scalar(M[c][c])
        M[c] = [x * inv for x in M[c]]
        Inv[c] = [x * inv for x in Inv[c]]
        for r in range(n):
            if r == c:
                continue
            f = M[r][c]
            if _is_zero(f):
                continue
            M[r] = [M[r][k] - f * M[c][k] for k in range(n)]
            Inv[r] = [Inv[r][k] - f * Inv[c][k] for k in range(n)]
    return Inv


# ---------------------------------------------------------------------------
# nilpotent exponentials


class NonTerminatingSeries(ArithmeticError):
    pass


def exp_nilpotent(x, max_terms: int | None = None):
    """Finite exponential series of an even nilpotent element.

    ``x`` must provide ``*``, ``+``, ``scale``, ``one`` and ``is_zero``.
    Raises :class:`NonTerminatingSeries` if ``x**k`` is still nonzero after
    ``max_terms`` steps (default: half the generator budget plus one).
    """
    if isinstance(x, GrassmannElement):
        if not x.is_even():
            raise ValueError("exp_nilpotent needs an even element")
        if not _is_zero(x.body()):
            raise ValueError("element has a nonzero body and is not nilpotent")
        bound = x.n // 2 + 1 if max_terms is None else max_terms
    else:
        bound = 64 if max_terms is None else max_terms
    out = x.one()
    term = x.one()
    for j in range(1, bound + 2):
        term = (term * x).scale(Fraction(1, j))
        if term.is_zero():
            return out
        out = out + term
    raise NonTerminatingSeries(f"power series did not terminate within {bound} terms")


# ---------------------------------------------------------------------------
# odd Gaussian integral


class GaussianIntegralResult:
    __slots__ = ("expansion", "closed_form")

    def __init__(self, expansion, closed_form):
        self.expansion = expansion
        self.closed_form = closed_form

    @property
    def value(self):
        return self.expansion


def odd_gaussian_integral(A, B: Sequence[GrassmannElement] | None = None, *,
                          n: int | None = None, chi_offset: int | None = None):
    """∫dχ exp(-½⟨χ,Aχ⟩ + ⟨χ,B⟩) computed two ways.

    The integration variables χ_1..χ_{2k} occupy generators
    ``chi_offset+1 .. chi_offset+2k`` of a Grassmann algebra whose remaining
    generators carry the odd entries of ``B``.  With ⟨χ,Aχ⟩ = Σ χ_i A_ij χ_j
    and ⟨χ,B⟩ = Σ χ_i B_i the closed form reads Pf(A)·exp(½ Σ_i (A⁻¹B)_i B_i).
    Raises ``ValueError`` when the two evaluations differ.
    """
    M = _entries(A)
    dim = len(M)
    AntisymMatrix(M)
    if dim % 2:
        raise ValueError(f"odd Gaussian integral needs even dimension, got {dim}")
    if B is None:
        B = []
    B = list(B)
    if B and len(B) != dim:
        raise ValueError("B must have the same length as A")
    if n is None:
        n = B[0].n if B else dim
    if chi_offset is None:
        chi_offset = n - dim
    if chi_offset < 0:
        raise ValueError("generator budget too small for the integration variables")
    for b in B:
        if b.n != n:
            raise ValueError("mismatched generator budgets")
        if not b.is_odd() and not b.is_zero():
            raise ValueError("entries of B must be odd")
        for k in b.terms:
            if any(chi_offset < i <= chi_offset + dim for i in k):
                raise ValueError("B uses generators reserved for the integration variables")
    chi = [GrassmannElement.generator(chi_offset + i + 1, n) for i in range(dim)]
    zero = GrassmannElement({}, n)
    expo = zero
    for i in range(dim):
        for j in range(dim):
            if not _is_zero(M[i][j]):
                expo = expo + (chi[i] * chi[j]) * (M[i][j] * Fraction(-1, 2))
    for i, b in enumerate(B):
        expo = expo + chi[i] * b
    integrand = exp_nilpotent(expo, max_terms=n)
    over = [chi_offset + i + 1 for i in range(dim)]
    expansion = berezin(integrand, over)

    pf = pfaffian(M)
    nonzero_B = any(not b.is_zero() for b in B)
    if not nonzero_B:
        closed = GrassmannElement.scalar(pf, n) if not _is_zero(pf) else zero
    else:
        try:
            Ainv = matrix_inverse(M)
        except ZeroDivisionError:
            raise ValueError("singular A with nonzero B: closed form undefined") from None
        quad = zero
        for i in range(dim):
            AinvB = zero
            for j in range(dim):
                if not _is_zero(Ainv[i][j]):
                    AinvB = AinvB + B[j] * Ainv[i][j]
            quad = quad + AinvB * B[i]
        closed = exp_nilpotent(quad * Fraction(1, 2), max_terms=n) * pf
    if not (expansion - closed).is_zero():
        raise ValueError(f"closed form {closed!r} disagrees with expansion {expansion!r}")
    return GaussianIntegralResult(expansion, closed)
