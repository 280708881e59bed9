"""JSON serialization of theories and the convention audit.

Theory JSON (version 1)::

    {
      "schema": "cohft-theory/1",
      "name": str, "description": str,
      "g": str,                       # Lie algebra name (u1, su2, so3, ...)
      "module": null | "sw" | "so3_monopole",
      "conventions": {clifford_sign, mu_polarization, codiff_sign, sd_norm},
      "fields": [{name, ghost, form, slot, constraint, real, latex}],
      "Phi": [str], "Psi": [str],
      "Q": {field: prefix},
      "K": {field: prefix},
      "K_components": {field: [prefix for ν = 0..3]},
      "equations": [{chi, b, F: prefix, LinF: prefix}]
    }

Rule strings use the prefix grammar of :func:`ir.to_prefix`, for example
``(add b (scale -1 (bracket theta chi)) (sd 1 (curv A)))``.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction

from ..rep_theory import lie_algebra, so3_monopole_module, sw_module
from . import ir
from .ir import FieldSymbol
from .theories import Conventions, Theory

SCHEMA_ID = "cohft-theory/1"
FIELD_KEYS = ("name", "ghost", "form", "slot", "constraint", "real", "latex")


def _module_kind(T: Theory):
    if T.module is None:
        return None
    return "so3_monopole" if T.g.name == "so3" else "sw"


def theory_to_json(T: Theory) -> dict:
    return {
        "schema": SCHEMA_ID,
        "name": T.name,
        "description": T.description,
        "g": T.g.name,
        "module": _module_kind(T),
        "conventions": T.conv.to_json(),
        "fields": [{k: getattr(s, k) for k in FIELD_KEYS} for s in T.fields.values()],
        "Phi": list(T.Phi),
        "Psi": list(T.Psi),
        "Q": {n: ir.to_prefix(e) for n, e in T.Q.items()},
        "K": {n: ir.to_prefix(e) for n, e in T.K.items()},
        "K_components": {n: [ir.to_prefix(fn(m)) for m in range(4)] for n, fn in T.K_components.items()},
        "equations": [{"chi": c, "b": b, "F": ir.to_prefix(F), "LinF": ir.to_prefix(L)}
                      for c, b, F, L in T.equations],
    }


def dumps(T: Theory) -> str:
    return json.dumps(theory_to_json(T), indent=2, sort_keys=True, ensure_ascii=False)


def _conventions(d: dict) -> Conventions:
    return Conventions(int(d["clifford_sign"]), Fraction(d["mu_polarization"]), int(d["codiff_sign"]),
                       Fraction(d["sd_norm"]))


def validate(d: dict) -> list:
    """Schema problems of a theory document (empty when valid)."""
    errs = []
    if d.get("schema") != SCHEMA_ID:
        errs.append(f"schema must be {SCHEMA_ID!r}")
    for k in ("name", "g", "fields", "Q", "equations", "conventions"):
        if k not in d:
            errs.append(f"missing key {k!r}")
    names = set()
    for f in d.get("fields", []):
        miss = [k for k in FIELD_KEYS if k not in f]
        if miss:
            errs.append(f"field {f.get('name')!r} lacks {miss}")
        names.add(f.get("name"))
    for n in d.get("Q", {}):
        if n not in names:
            errs.append(f"Q rule for undeclared field {n!r}")
    return errs


def theory_from_json(d: dict | str) -> Theory:
    if isinstance(d, str):
        d = json.loads(d)
    errs = validate(d)
    if errs:
        raise ValueError("invalid theory document: " + "; ".join(errs))
    conv = _conventions(d["conventions"])
    mod = None
    if d.get("module") == "sw":
        mod = sw_module(conv.clifford_sign)
    elif d.get("module") == "so3_monopole":
        mod = so3_monopole_module(conv.clifford_sign)
    g = mod.g if mod is not None and d["module"] == "so3_monopole" else lie_algebra(d["g"])
    fields = {f["name"]: FieldSymbol(*(f[k] for k in FIELD_KEYS)) for f in d["fields"]}
    T = Theory(d["name"], g, mod, conv, fields, Phi=tuple(d.get("Phi", ())), Psi=tuple(d.get("Psi", ())),
               description=d.get("description", ""))
    parse = lambda s: ir.from_prefix(s, fields)  # noqa: E731
    T.Q = {n: parse(s) for n, s in d["Q"].items()}
    T.K = {n: parse(s) for n, s in d.get("K", {}).items()}
    comps = {n: [parse(s) for s in ss] for n, ss in d.get("K_components", {}).items()}
    T.K_components = {n: (lambda m, v=v: v[m]) for n, v in comps.items()}
    T.equations = [(e["chi"], e["b"], parse(e["F"]), parse(e["LinF"])) for e in d["equations"]]
    bad = T.rule_bidegree_report()
    if bad:
        raise ir.BidegreeError(f"rules with wrong bidegree: {bad}")
    return T


# ---------------------------------------------------------------------------
# invariance assertions for gauge fermions


def _pairings(e: ir.Expr) -> list:
    return [x for x in e.walk() if x.op == "inner"]


def gauge_fermion_invariance(T: Theory, trials: int = 2, seed: int = 0) -> dict:
    """θ-independence of the gauge fermions and ad-invariance of their pairings.

    Ad-invariance is checked pointwise as ⟨x·a, b⟩ + ⟨a, x·b⟩ = 0 for the
    even parameter x = λ acting on both arguments of every pairing.
    """
    from .actions import gauge_fermion_min, gauge_fermion_standard
    from .evaluate import Evaluator, random_config
    gfs = {"min": gauge_fermion_min(T), "standard": gauge_fermion_standard(T)}
    theta_free = {k: "theta" not in g.leaves() for k, g in gfs.items()}
    x = T.f("lambda")

    def act(y):
        return ir.act(x, y)
    checks = []
    for g in gfs.values():
        for p in _pairings(g):
            a, b = p.args
            checks.append(ir.add(ir.inner(act(a), b), ir.inner(a, act(b))))
    ok = True
    for k in range(trials):
        ev = Evaluator(T, random_config(T, 2, 8, seed + k))
        ok = ok and all(ev(c).is_zero() for c in checks)
    return {"theta_free": theta_free, "pairings": len(checks), "ad_invariant": ok}


# ---------------------------------------------------------------------------
# convention audit

AUDIT_GRID = {
    "clifford_sign": (-1, 1),
    "mu_polarization": (Fraction(1, 2), Fraction(1)),
    "codiff_sign": (1, -1),
    "sd_norm": (Fraction(1, 2), Fraction(1)),
}


def convention_audit(theories=("dw", "sw_u1", "kw", "gsw_so3"), trials: int = 1, cutoff: int = 1,
                     budget: int = 8, seed: int = 0, suites=("nilpotency", "action")) -> dict:
    """Run the suites under every assignment of the audited toggles.

    Returns, per assignment, the failing identities; ``satisfying`` lists the
    assignments with none.
    """
    from ..verifier import SuiteSpec, applicable, run_suite
    rows = []
    keys = list(AUDIT_GRID)
    for vals in itertools.product(*(AUDIT_GRID[k] for k in keys)):
        conv = Conventions(*vals)
        fails = []
        for tn in theories:
            for s in suites:
                if not applicable(s, tn):
                    continue
                r = run_suite(SuiteSpec(s, tn, trials, cutoff, budget, seed, conventions=conv))
                fails += [f"{tn}/{s}/{x['name']}" for x in r.identities if x["status"] != "pass"]
        rows.append({"conventions": conv.to_json(), "failures": fails})
    sat = [r["conventions"] for r in rows if not r["failures"]]
    return {"grid": {k: [str(v) for v in vs] for k, vs in AUDIT_GRID.items()}, "rows": rows, "satisfying": sat,
            "shipped": Conventions().to_json(), "shipped_satisfies": Conventions().to_json() in sat}
