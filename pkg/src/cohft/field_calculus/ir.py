"""Typed field-expression trees.

An :class:`Expr` is an immutable node ``(op, args, params)`` carrying its
bidegree ``(ghost, form)`` and value slot.  Slots are ``"ad"`` (adjoint
valued), ``"spin"`` (spinor valued), ``"scalar"`` (real or complex scalar
forms) and ``"number"`` (an integrated Grassmann number).

Builders check bidegrees and slots as the tree is built.  :func:`normalize`
expands a tree into a canonical sum of monomials with exact coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from ..exact_core import ExactScalar

E = ExactScalar
SLOTS = ("ad", "spin", "scalar", "number")
CONSTRAINTS = (None, "sd", "asd", "spin+", "spin-")


class BidegreeError(TypeError):
    """A node was built from arguments of incompatible bidegree or slot."""


@dataclass(frozen=True)
class FieldSymbol:
    name: str
    ghost: int
    form: int
    slot: str
    constraint: str | None = None
    real: bool = True
    latex: str = ""

    def __post_init__(self):
        if self.slot not in ("ad", "spin", "scalar"):
            raise BidegreeError(f"bad slot {self.slot!r}")
        if not 0 <= self.form <= 4:
            raise BidegreeError(f"bad form degree {self.form}")
        if self.constraint not in CONSTRAINTS:
            raise BidegreeError(f"bad constraint {self.constraint!r}")
        if self.constraint in ("sd", "asd") and self.form != 2:
            raise BidegreeError("self-duality constraint needs a 2-form")

    @property
    def parity(self) -> int:
        return (self.ghost + self.form) % 2

    @property
    def tex(self) -> str:
        return self.latex or self.name


class Expr:
    """Immutable expression node with cached hash."""

    __slots__ = ("op", "args", "params", "ghost", "form", "slot", "_h")

    def __init__(self, op: str, args: tuple, params: tuple, ghost: int, form: int, slot: str):
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "ghost", ghost)
        object.__setattr__(self, "form", form)
        object.__setattr__(self, "slot", slot)
        object.__setattr__(self, "_h", hash((op, args, params, ghost, form, slot)))

    def __setattr__(self, k, v):
        raise AttributeError("Expr is immutable")

    def __hash__(self):
        return self._h

    def __eq__(self, o):
        if self is o:
            return True
        return (isinstance(o, Expr) and self._h == o._h and self.op == o.op
                and self.params == o.params and self.args == o.args
                and self.ghost == o.ghost and self.form == o.form and self.slot == o.slot)

    @property
    def bidegree(self) -> tuple:
        return (self.ghost, self.form)

    def __add__(self, o):
        return add(self, o)

    def __sub__(self, o):
        return add(self, neg(o))

    def __neg__(self):
        return neg(self)

    def __rmul__(self, c):
        return scale(c, self)

    def __repr__(self):
        return to_prefix(self)

    def is_zero(self) -> bool:
        return self.op == "zero"

    def leaves(self) -> set:
        out = set()
        stack = [self]
        while stack:
            e = stack.pop()
            if e.op == "field":
                out.add(e.params[0].name)
            stack.extend(a for a in e.args if isinstance(a, Expr))
        return out

    def walk(self):
        yield self
        for a in self.args:
            yield from a.walk()


def _mk(op, args, params, ghost, form, slot):
    if form < 0 or form > 4:
        return zero(ghost, max(0, min(form, 4)), slot)
    return Expr(op, tuple(args), tuple(params), ghost, form, slot)


def _coef(c) -> ExactScalar:
    if isinstance(c, Fraction):
        return E(c)
    return E.coerce(c)


# ---------------------------------------------------------------------------
# builders


def field(sym: FieldSymbol) -> Expr:
    return Expr("field", (), (sym,), sym.ghost, sym.form, sym.slot)


def zero(ghost: int, form: int, slot: str) -> Expr:
    return Expr("zero", (), (), ghost, form, slot)


def zero_like(e: Expr) -> Expr:
    return zero(e.ghost, e.form, e.slot)


def add(*xs: Expr) -> Expr:
    items = []
    for x in xs:
        if x.op == "add":
            items.extend(x.args)
        elif x.op != "zero":
            items.append(x)
    ref = xs[0]
    for x in xs[1:]:
        if (x.ghost, x.form, x.slot) != (ref.ghost, ref.form, ref.slot):
            raise BidegreeError(
                f"adding {(x.ghost, x.form, x.slot)} to {(ref.ghost, ref.form, ref.slot)}: {x!r} + {ref!r}")
    if not items:
        return zero_like(ref)
    if len(items) == 1:
        return items[0]
    return Expr("add", tuple(items), (), ref.ghost, ref.form, ref.slot)


def sum_of(xs: Iterable[Expr], like: Expr | None = None) -> Expr:
    xs = list(xs)
    if not xs:
        if like is None:
            raise ValueError("empty sum needs a template")
        return zero_like(like)
    return add(*xs)


def scale(c, x: Expr) -> Expr:
    c = _coef(c)
    if not c or x.op == "zero":
        return zero_like(x)
    if c == E(1):
        return x
    if x.op == "scale":
        return scale(c * x.params[0], x.args[0])
    return Expr("scale", (x,), (c,), x.ghost, x.form, x.slot)


def neg(x: Expr) -> Expr:
    return scale(-1, x)


def _bin(op, a, b, slot, form, need=None):
    if need is not None and (a.slot, b.slot) != need:
        raise BidegreeError(f"{op} needs slots {need}, got {(a.slot, b.slot)}")
    g = a.ghost + b.ghost
    if a.op == "zero" or b.op == "zero" or form > 4 or form < 0:
        return zero(g, max(0, min(form, 4)), slot)
    return Expr(op, (a, b), (), g, form, slot)


def bracket(a: Expr, b: Expr) -> Expr:
    return _bin("bracket", a, b, "ad", a.form + b.form, ("ad", "ad"))


def act(x: Expr, s: Expr) -> Expr:
    """ρ(x)∧s for spinors, [x∧s] for ad-valued s."""
    if s.slot == "ad":
        return bracket(x, s)
    return _bin("act", x, s, "spin", x.form + s.form, ("ad", "spin"))


def inner(a: Expr, b: Expr) -> Expr:
    """⟨a, b⟩vol as a scalar top form."""
    if a.slot != b.slot:
        raise BidegreeError(f"inner of slots {a.slot}, {b.slot}")
    if a.form != b.form:
        raise BidegreeError(f"inner of form degrees {a.form}, {b.form}")
    return _bin("inner", a, b, "scalar", 4)


def lpair(a: Expr, b: Expr) -> Expr:
    """Invariant pairing of the values of a∧b (no Hodge star)."""
    if a.slot != b.slot or a.slot not in ("ad", "scalar"):
        raise BidegreeError(f"lpair of slots {a.slot}, {b.slot}")
    return _bin("lpair", a, b, "scalar", a.form + b.form)


def mub(s: Expr, u: Expr) -> Expr:
    if s.form or u.form:
        raise BidegreeError("μ needs spinor 0-forms")
    return _bin("mub", s, u, "ad", 2, ("spin", "spin"))


def mu(s: Expr) -> Expr:
    if s.slot != "spin" or s.form:
        raise BidegreeError("μ needs a spinor 0-form")
    if s.op == "zero":
        return zero(2 * s.ghost, 2, "ad")
    return Expr("mu", (s,), (), 2 * s.ghost, 2, "ad")


def cliff(m: int, s: Expr) -> Expr:
    if s.slot != "spin":
        raise BidegreeError("Clifford multiplication needs a spinor")
    if s.op == "zero":
        return s
    return Expr("cliff", (s,), (m,), s.ghost, s.form, "spin")


def cliffact(w: Expr, s: Expr) -> Expr:
    """Σ_μ γ_μ ρ(ι_μ w) s."""
    return _bin("cliffact", w, s, "spin", w.form - 1 + s.form, ("ad", "spin"))


def dirac(A: Expr, s: Expr) -> Expr:
    if A.ghost:
        raise BidegreeError("connection must have ghost degree 0")
    if s.op == "zero":
        return s
    if s.slot != "spin" or s.form:
        raise BidegreeError("Dirac operator acts on spinor 0-forms")
    return Expr("dirac", (A, s), (), s.ghost, 0, "spin")


def curv(A: Expr) -> Expr:
    if A.ghost or A.form != 1 or A.slot != "ad":
        raise BidegreeError("curvature needs an ad-valued ghost-0 1-form")
    return Expr("curv", (A,), (), 0, 2, "ad")


def covd(A: Expr, a: Expr) -> Expr:
    if A.ghost:
        raise BidegreeError("connection must have ghost degree 0")
    if a.op == "zero" or a.form == 4:
        return zero(a.ghost, min(a.form + 1, 4), a.slot)
    return Expr("covd", (A, a), (), a.ghost, a.form + 1, a.slot)


def covcod(A: Expr, a: Expr) -> Expr:
    if A.ghost:
        raise BidegreeError("connection must have ghost degree 0")
    if a.slot != "ad":
        raise BidegreeError("covariant codifferential acts on ad-valued forms")
    if a.op == "zero" or a.form == 0:
        return zero(a.ghost, max(a.form - 1, 0), a.slot)
    return Expr("covcod", (A, a), (), a.ghost, a.form - 1, "ad")


def codlin(X: Expr, a: Expr) -> Expr:
    """-Σ_μ ι_μ[ι_μ X, a]: the A-linear part of d_A^*."""
    return _bin("codlin", X, a, "ad", X.form + a.form - 2, ("ad", "ad"))


def _unary(op, a, form, params=(), slot=None):
    slot = slot or a.slot
    if a.op == "zero" or form < 0 or form > 4:
        return zero(a.ghost, max(0, min(form, 4)), slot)
    return Expr(op, (a,), tuple(params), a.ghost, form, slot)


def sd(sign: int, a: Expr) -> Expr:
    if a.form != 2:
        raise BidegreeError("self-dual projection needs a 2-form")
    return _unary("sd", a, 2, (1 if sign > 0 else -1,))


def csd(sign: int, a: Expr) -> Expr:
    """Complex projection ½(T ± ⋆conj(T))."""
    if a.form != 2:
        raise BidegreeError("self-dual projection needs a 2-form")
    return _unary("csd", a, 2, (1 if sign > 0 else -1,))


def star(a: Expr) -> Expr:
    return _unary("star", a, 4 - a.form)


def d(a: Expr) -> Expr:
    return _unary("d", a, a.form + 1)


def interior(m: int, a: Expr) -> Expr:
    return _unary("interior", a, a.form - 1, (m,))


def partial(m: int, a: Expr) -> Expr:
    return _unary("partial", a, a.form, (m,))


def dxw(m: int, a: Expr) -> Expr:
    return _unary("dxw", a, a.form + 1, (m,))


def re(a: Expr) -> Expr:
    return _unary("re", a, a.form)


def im(a: Expr) -> Expr:
    return _unary("im", a, a.form)


def conj(a: Expr) -> Expr:
    return _unary("conj", a, a.form)


def integrate(a: Expr) -> Expr:
    if a.slot != "scalar":
        raise BidegreeError("only scalar top forms integrate")
    if a.op != "zero" and a.form != 4:
        raise BidegreeError(f"integrand has form degree {a.form}")
    if a.op == "zero":
        return zero(a.ghost, 0, "number")
    return Expr("integrate", (a,), (), a.ghost, 0, "number")


I_UNIT = E(0, 1)
HALF = E(Fraction(1, 2))

LINEAR_UNARY = ("scale", "sd", "csd", "star", "d", "interior", "partial", "dxw", "re", "im",
                "conj", "integrate", "cliff")
MULTILINEAR = ("bracket", "act", "inner", "lpair", "mub", "cliffact", "codlin")
AFFINE = ("curv", "covd", "covcod", "dirac", "mu")


def rebuild(e: Expr, args: list) -> Expr:
    """Same node with new arguments (bidegrees recomputed by the builder)."""
    op, p = e.op, e.params
    if op == "add":
        return add(*args)
    if op == "scale":
        return scale(p[0], args[0])
    if op in ("bracket", "act", "inner", "lpair", "mub", "cliffact", "codlin"):
        return {"bracket": bracket, "act": act, "inner": inner, "lpair": lpair, "mub": mub,
                "cliffact": cliffact, "codlin": codlin}[op](*args)
    if op == "mu":
        return mu(args[0])
    if op == "cliff":
        return cliff(p[0], args[0])
    if op in ("dirac", "covd", "covcod"):
        return {"dirac": dirac, "covd": covd, "covcod": covcod}[op](*args)
    if op == "curv":
        return curv(args[0])
    if op in ("sd", "csd"):
        return (sd if op == "sd" else csd)(p[0], args[0])
    if op in ("interior", "partial", "dxw"):
        return {"interior": interior, "partial": partial, "dxw": dxw}[op](p[0], args[0])
    if op in ("star", "d", "re", "im", "conj", "integrate"):
        return {"star": star, "d": d, "re": re, "im": im, "conj": conj, "integrate": integrate}[op](args[0])
    raise ValueError(f"cannot rebuild node {op}")


# ---------------------------------------------------------------------------
# canonical form


def _key(e: Expr):
    return to_prefix(e)


def terms(e: Expr) -> list:
    """Expand into [(coefficient, monomial)] with multilinear distribution."""
    op = e.op
    if op == "zero":
        return []
    if op == "field":
        return [(E(1), e)]
    if op == "add":
        out = []
        for a in e.args:
            out.extend(terms(a))
        return out
    if op == "scale":
        c = e.params[0]
        return [(c * k, m) for k, m in terms(e.args[0])]
    if op in MULTILINEAR:
        combos = [(E(1), [])]
        for a in e.args:
            ta = terms(a)
            combos = [(c * k, ms + [m]) for c, ms in combos for k, m in ta]
        return [(c, rebuild(e, ms)) for c, ms in combos]
    if op in ("sd", "csd", "star", "d", "interior", "partial", "dxw", "re", "im", "integrate", "cliff", "conj"):
        out = []
        for k, m in terms(e.args[0]):
            if op == "conj":
                k = k.conj()
            elif op in ("re", "im") and not k.is_real():
                # keep complex coefficients inside the node
                out.append((E(1), rebuild(e, [scale(k, m)])))
                continue
            r = rebuild(e, [m])
            if r.op != "zero":
                out.append((k, r))
        return out
    # affine nodes are atomic in the canonical form; their arguments are normalized
    return [(E(1), rebuild(e, [normalize(a) for a in e.args]))]


def _combine(ts: list) -> list:
    acc: dict = {}
    order = {}
    for c, m in ts:
        if m.op == "zero":
            continue
        k = _key(m)
        if k in acc:
            acc[k] = (acc[k][0] + c, m)
        else:
            acc[k] = (c, m)
            order[k] = m
    return sorted(((c, m) for c, m in acc.values() if c), key=lambda t: (_size(t[1]), _key(t[1])))


def _size(e: Expr) -> int:
    return 1 + sum(_size(a) for a in e.args)


def _euler(ts: list) -> list:
    """Σ_ν dx^ν∧ι_ν X → deg(X)·X for every complete group of four."""
    groups: dict = {}
    rest = []
    for c, m in ts:
        if m.op == "dxw" and m.args[0].op == "interior" and m.args[0].params[0] == m.params[0]:
            X = m.args[0].args[0]
            groups.setdefault((_key(X), c), {})[m.params[0]] = (X, m)
        else:
            rest.append((c, m))
    for (kx, c), g in groups.items():
        if len(g) == 4:
            X = next(iter(g.values()))[0]
            rest.extend((c * X.form * k, mm) for k, mm in terms(X))
        else:
            rest.extend((c, m) for _, m in g.values())
    return rest


def normalize(e: Expr) -> Expr:
    """Canonical sum of monomials; equal expansions give equal trees."""
    ts = _combine(terms(e))
    for _ in range(4):
        new = _combine(_euler(ts))
        if [(_key(m), c) for c, m in new] == [(_key(m), c) for c, m in ts]:
            break
        ts = new
    if not ts:
        return zero_like(e)
    return add(*[scale(c, m) for c, m in ts])


def monomials(e: Expr) -> list:
    return _combine(terms(e))


def structurally_equal(a: Expr, b: Expr) -> bool:
    return normalize(add(a, neg(b))).op == "zero"


# ---------------------------------------------------------------------------
# prefix grammar
#
#   expr := NAME | (op [param...] expr...)
#   params are integers or exact rationals written a/b or a/b+c/di
#
# Leaves are resolved against a theory's field table.


def _fmt_coef(c: ExactScalar) -> str:
    return str(c).replace(" ", "")


def to_prefix(e: Expr) -> str:
    op = e.op
    if op == "field":
        return e.params[0].name
    if op == "zero":
        return f"(zero {e.ghost} {e.form} {e.slot})"
    ps = []
    for p in e.params:
        ps.append(_fmt_coef(p) if isinstance(p, ExactScalar) else str(p))
    parts = [op] + ps + [to_prefix(a) for a in e.args]
    return "(" + " ".join(parts) + ")"


def _tokens(s: str):
    out = []
    cur = ""
    for ch in s:
        if ch in "()":
            if cur:
                out.append(cur)
                cur = ""
            out.append(ch)
        elif ch.isspace():
            if cur:
                out.append(cur)
                cur = ""
        else:
            cur += ch
    if cur:
        out.append(cur)
    return out


def _parse_coef(tok: str) -> ExactScalar:
    t = tok
    if t.endswith("i"):
        body = t[:-1]
        # split at the last sign that is not leading
        k = max(body.rfind("+", 1), body.rfind("-", 1))
        if k > 0:
            return E(Fraction(body[:k]), Fraction(body[k:] or "1"))
        if body in ("", "+"):
            return E(0, 1)
        if body == "-":
            return E(0, -1)
        return E(0, Fraction(body))
    return E(Fraction(t))


PARAM_COUNT = {"scale": 1, "cliff": 1, "sd": 1, "csd": 1, "interior": 1, "partial": 1, "dxw": 1}


def from_prefix(s: str, symbols: dict) -> Expr:
    toks = _tokens(s)
    pos = 0

    def parse():
        nonlocal pos
        t = toks[pos]
        pos += 1
        if t != "(":
            if t not in symbols:
                raise ValueError(f"unknown field {t!r}")
            return field(symbols[t])
        op = toks[pos]
        pos += 1
        if op == "zero":
            g, f, slot = int(toks[pos]), int(toks[pos + 1]), toks[pos + 2]
            pos += 4
            return zero(g, f, slot)
        params = []
        for _ in range(PARAM_COUNT.get(op, 0)):
            tok = toks[pos]
            pos += 1
            params.append(_parse_coef(tok) if op == "scale" else int(tok))
        args = []
        while toks[pos] != ")":
            args.append(parse())
        pos += 1
        return rebuild(Expr(op, (), tuple(params), 0, 0, "ad"), args)

    e = parse()
    if pos != len(toks):
        raise ValueError("trailing tokens in prefix expression")
    return e


# ---------------------------------------------------------------------------
# LaTeX


def _tex_coef(c: ExactScalar) -> str:
    if c.is_real():
        q = Fraction(int(c.re.numerator), int(c.re.denominator))
        a = abs(q)
        if a.denominator == 1:
            return "" if a == 1 else str(a.numerator)
        return f"\\frac{{{a.numerator}}}{{{a.denominator}}}"
    return "(" + _fmt_coef(c) + ")"


def _tex(e: Expr) -> str:
    op = e.op
    a = e.args
    if op == "field":
        return e.params[0].tex
    if op == "zero":
        return "0"
    if op == "add":
        return emit_sum(e)
    if op == "scale":
        c = e.params[0]
        inner_t = _tex(a[0])
        if a[0].op == "add":
            inner_t = f"({inner_t})"
        s = _tex_coef(c)
        return ("-" if c.is_real() and c.re < 0 else "") + s + inner_t
    if op == "bracket":
        return f"[{_tex(a[0])},{_tex(a[1])}]"
    if op == "act":
        return f"{_tex(a[0])}{_tex(a[1])}"
    if op == "inner":
        return f"\\langle {_tex(a[0])},{_tex(a[1])}\\rangle"
    if op == "lpair":
        return f"\\mathrm{{Tr}}({_tex(a[0])}\\wedge {_tex(a[1])})"
    if op == "mu":
        return f"\\mu({_tex(a[0])})"
    if op == "mub":
        return f"\\mu({_tex(a[0])},{_tex(a[1])})"
    if op == "cliff":
        return f"e_{{{e.params[0]}}}{_tex(a[0])}"
    if op == "cliffact":
        return f"{_tex(a[0])}{_tex(a[1])}"
    if op == "dirac":
        return f"\\slashed{{D}}_{{{_tex(a[0])}}}{_tex(a[1])}"
    if op == "curv":
        return f"F_{{{_tex(a[0])}}}"
    if op == "covd":
        return f"d_{{{_tex(a[0])}}}{_paren(a[1])}"
    if op == "covcod":
        return f"d_{{{_tex(a[0])}}}^*{_paren(a[1])}"
    if op == "codlin":
        return f"\\iota[{_tex(a[0])},{_tex(a[1])}]"
    if op in ("sd", "csd"):
        s = "+" if e.params[0] > 0 else "-"
        return f"({_tex(a[0])})_{s}"
    if op == "star":
        return f"\\star {_paren(a[0])}"
    if op == "d":
        return f"d{_paren(a[0])}"
    if op == "interior":
        return f"\\iota_{{{e.params[0]}}}{_paren(a[0])}"
    if op == "partial":
        return f"\\partial_{{{e.params[0]}}}{_paren(a[0])}"
    if op == "dxw":
        return f"dx^{{{e.params[0]}}}\\wedge {_paren(a[0])}"
    if op in ("re", "im"):
        return f"\\mathrm{{{op.capitalize()}}}{_paren(a[0])}"
    if op == "conj":
        return f"\\overline{{{_tex(a[0])}}}"
    if op == "integrate":
        return f"\\int_M {_tex(a[0])}"
    raise ValueError(op)


def _paren(e: Expr) -> str:
    t = _tex(e)
    return f"({t})" if e.op in ("add", "scale") else t


def emit_sum(e: Expr) -> str:
    parts = e.args if e.op == "add" else (e,)
    out = ""
    for i, p in enumerate(parts):
        t = _tex(p)
        if i == 0:
            out = t
        elif t.startswith("-"):
            out += " - " + t[1:]
        else:
            out += " + " + t
    return out


def emit_latex(e: Expr, canonical: bool = True) -> str:
    """Deterministic LaTeX rendering (canonical monomial order by default)."""
    if canonical:
        e = normalize(e)
    return _tex(e)


# ---------------------------------------------------------------------------
# plain-text rendering

TEXT_NAMES = {"theta": "θ", "phi": "φ", "psi": "ψ", "chi": "χ", "eta": "η", "lambda": "λ", "sigma": "σ",
              "upsilon": "υ", "xi": "ξ", "psit": "ψ̃", "chit": "χ̃", "bt": "b̃", "etat": "η̃"}
_SUP = {1: "⁺", -1: "⁻"}
_SUB = {1: "₊", -1: "₋"}


def _txt_coef(c: ExactScalar) -> str:
    if c.is_real():
        a = abs(Fraction(int(c.re.numerator), int(c.re.denominator)))
        return "" if a == 1 else f"{a}·"
    return f"({_fmt_coef(c)})·"


def _txt_paren(e: Expr) -> str:
    t = emit_text(e, canonical=False)
    return f"({t})" if e.op in ("add", "scale") else t


def emit_text(e: Expr, canonical: bool = True) -> str:
    """Deterministic Unicode rendering; (d_A x)_± is written d_A^± x."""
    if canonical:
        e = normalize(e)
    op, a = e.op, e.args
    r = lambda x: emit_text(x, canonical=False)  # noqa: E731
    if op == "field":
        n = e.params[0].name
        return TEXT_NAMES.get(n, n)
    if op == "zero":
        return "0"
    if op == "add":
        out = ""
        for i, p in enumerate(a):
            t = r(p)
            out = t if i == 0 else out + (f" - {t[1:]}" if t.startswith("-") else f" + {t}")
        return out
    if op == "scale":
        c = e.params[0]
        body = f"({r(a[0])})" if a[0].op == "add" else r(a[0])
        return ("-" if c.is_real() and c.re < 0 else "") + _txt_coef(c) + body
    if op == "bracket":
        return f"[{r(a[0])}, {r(a[1])}]"
    if op in ("act", "cliffact"):
        return f"{r(a[0])}·{r(a[1])}"
    if op == "inner":
        return f"⟨{r(a[0])}, {r(a[1])}⟩"
    if op == "lpair":
        return f"Tr({r(a[0])}∧{r(a[1])})"
    if op == "mu":
        return f"μ({r(a[0])})"
    if op == "mub":
        return f"μ({r(a[0])}, {r(a[1])})"
    if op == "cliff":
        return f"e{e.params[0]}·{r(a[0])}"
    if op == "dirac":
        return f"D_{r(a[0])}{_txt_paren(a[1])}"
    if op == "curv":
        return f"F_{r(a[0])}"
    if op == "covd":
        return f"d_{r(a[0])}{_txt_paren(a[1])}"
    if op == "covcod":
        return f"d*_{r(a[0])}{_txt_paren(a[1])}"
    if op == "codlin":
        return f"ι[{r(a[0])}, {r(a[1])}]"
    if op in ("sd", "csd"):
        s = e.params[0]
        x = a[0]
        if op == "sd" and x.op == "covd":
            return f"d_{r(x.args[0])}{_SUP[s]}{_txt_paren(x.args[1])}"
        return f"({r(x)}){_SUB[s]}" + ("ᶜ" if op == "csd" else "")
    if op == "star":
        return f"⋆{_txt_paren(a[0])}"
    if op == "d":
        return f"d{_txt_paren(a[0])}"
    if op == "interior":
        return f"ι_{e.params[0]}{_txt_paren(a[0])}"
    if op == "partial":
        return f"∂_{e.params[0]}{_txt_paren(a[0])}"
    if op == "dxw":
        return f"dx{e.params[0]}∧{_txt_paren(a[0])}"
    if op in ("re", "im"):
        return f"{op.capitalize()}{_txt_paren(a[0])}"
    if op == "conj":
        return f"conj{_txt_paren(a[0])}"
    if op == "integrate":
        return f"∫ {r(a[0])}"
    raise ValueError(op)


def substitute_zero(e: Expr, names) -> Expr:
    """e with the named fields set to zero."""
    names = set(names)
    if e.op == "field":
        return zero_like(e) if e.params[0].name in names else e
    if not e.args:
        return e
    new = [substitute_zero(x, names) for x in e.args]
    if all(x is y for x, y in zip(new, e.args)):
        return e
    if e.op in MULTILINEAR and any(x.op == "zero" for x in new):
        return zero_like(e)
    if e.op in ("sd", "csd", "star", "d", "interior", "partial", "dxw", "re", "im", "conj", "integrate",
                "cliff", "scale") and new[0].op == "zero":
        return zero_like(e)
    if e.op == "add":
        kept = [x for x in new if x.op != "zero"]
        return add(*kept) if kept else zero_like(e)
    return rebuild(e, new)
