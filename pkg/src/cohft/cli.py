"""Command-line front end.

Exit codes: 0 all checks pass, 1 some check fails, 2 usage error (unknown
theory, suite, vector field, bad flag or config).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from .field_calculus import ir
from .field_calculus.theories import ALIASES, BUILTINS, builtin_theory

SUITE_NAMES = ("nilpotency", "action", "vector-susy", "descent", "kw", "brst")
SEED_ENV = "COHFT_SEED"
DEFAULTS = {"trials": 20, "cutoff": 2, "budget": 8, "seed": 0, "truncation": 4, "grid": "64x128"}


class UsageError(Exception):
    pass


def _theory_name(name: str) -> str:
    n = ALIASES.get(name, name)
    if n not in BUILTINS:
        raise UsageError(f"unknown theory {name!r}; known: {sorted(BUILTINS)} (aliases {sorted(ALIASES)})")
    return n


def _settings(args) -> dict:
    """Defaults < environment < config file < explicit flags."""
    out = dict(DEFAULTS)
    if os.environ.get(SEED_ENV):
        try:
            out["seed"] = int(os.environ[SEED_ENV])
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer") from None
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        unknown = set(cfg) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys {sorted(unknown)}")
        out.update(cfg)
    for k in DEFAULTS:
        v = getattr(args, k, None)
        if v is not None:
            out[k] = v
    for k in ("trials", "cutoff", "budget", "seed", "truncation"):
        if not isinstance(out[k], int) or (k != "seed" and out[k] < 0):
            raise UsageError(f"{k} must be a non-negative integer")
    return out


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False, default=str)


# ---------------------------------------------------------------------------
# verify / expand / export / audit


def cmd_verify(args) -> int:
    from .verifier import SuiteSpec, applicable, run_suite
    s = _settings(args)
    tn = _theory_name(args.theory)
    suites = SUITE_NAMES if args.suite == "all" else (args.suite,)
    if args.suite != "all" and not applicable(args.suite, tn):
        raise UsageError(f"suite {args.suite!r} does not apply to theory {tn!r}")
    reports = [run_suite(SuiteSpec(x, tn, s["trials"], s["cutoff"], s["budget"], s["seed"]))
               for x in suites if applicable(x, tn)]
    ok = all(r.passed for r in reports)
    if args.json:
        _emit(_dump({"theory": tn, "passed": ok, "reports": [r.to_json(timing=args.timing) for r in reports]}),
              args.output)
    else:
        _emit("\n".join(r.text() for r in reports), args.output)
    return 0 if ok else 1


def _expansion(T, functional: str):
    from .field_calculus.actions import action_min, action_standard
    if functional == "min":
        return action_min(T)
    if functional == "standard":
        return action_standard(T)
    raise UsageError(f"unknown functional {functional!r}")


def cmd_expand(args) -> int:
    T = builtin_theory(_theory_name(args.theory))
    e = ir.substitute_zero(_expansion(T, args.functional), ["theta"])
    if args.latex:
        body = ir.emit_latex(e)
        _emit("\\documentclass{article}\n\\usepackage{amsmath,amssymb,slashed}\n\\begin{document}\n"
              f"\\begin{{multline*}}\n{body}\n\\end{{multline*}}\n\\end{{document}}", args.output)
    else:
        _emit(ir.emit_text(e), args.output)
    return 0


def cmd_export(args) -> int:
    from .field_calculus.schema import dumps
    _emit(dumps(builtin_theory(_theory_name(args.theory))), args.output)
    return 0


def cmd_audit(args) -> int:
    from .field_calculus.schema import convention_audit
    s = _settings(args)
    theories = [_theory_name(t) for t in args.theories.split(",")] if args.theories else list(BUILTINS)
    rep = convention_audit(theories, trials=s["trials"], cutoff=s["cutoff"], budget=s["budget"], seed=s["seed"])
    if args.json:
        _emit(_dump(rep), args.output)
    else:
        lines = []
        for row in rep["rows"]:
            c = row["conventions"]
            tag = "ok " if not row["failures"] else f"{len(row['failures'])} fail"
            lines.append(f"{tag:7} {json.dumps(c, sort_keys=True)}")
        lines.append(f"shipped {json.dumps(rep['shipped'], sort_keys=True)} satisfies: {rep['shipped_satisfies']}")
        _emit("\n".join(lines), args.output)
    return 0 if rep["shipped_satisfies"] else 1


# ---------------------------------------------------------------------------
# equivariant


def cmd_equivariant(args) -> int:
    from .equivariant import equivariant_suite
    s = _settings(args)
    try:
        rep = equivariant_suite(args.g, args.module, s["truncation"])
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        _emit(_dump(rep), args.output)
    else:
        lines = [f"equivariant [{args.g}, {args.module}] truncation={s['truncation']}"]
        lines += [f"  {'PASS' if v else 'FAIL'} {k}" for k, v in rep["checks"].items()]
        lines += [f"  {'PASS' if v else 'FAIL'} (reversed) {k}" for k, v in rep["reversed_conjugation"].items()]
        _emit("\n".join(lines), args.output)
    return 0 if rep["pass"] else 1


# ---------------------------------------------------------------------------
# toy model


def _csv_rows(rows) -> str:
    import io
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "value", "convergence_estimate"])
    for r in rows:
        w.writerow([f"{r['t']:g}", f"{r['value']:.6f}", f"{r['estimate']:.3e}"])
    return buf.getvalue().rstrip("\n")


def cmd_toy(args) -> int:
    from . import toy_model as tm
    s = _settings(args)
    try:
        grid = tm.parse_grid(s["grid"])
        if args.toy_cmd in ("euler", "ph", "sweep"):
            tm.vector_field(args.vf)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    if args.toy_cmd == "euler":
        rows = [tm.euler_characteristic(args.vf, args.t, grid, ift=args.ift)]
        ok = True
    elif args.toy_cmd == "sweep":
        try:
            ts = [float(x) for x in args.ts.split(",")]
        except ValueError:
            raise UsageError(f"bad t list {args.ts!r}") from None
        sw = tm.t_sweep(args.vf, ts, grid, ift=args.ift)
        rows = sw["rows"]
        ok = True
    elif args.toy_cmd == "ph":
        r = tm.euler_characteristic(args.vf, args.tmax, grid)
        try:
            idx = tm.index_sum(args.vf)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        tol = 5e-3 if any(d > 1 for _, d in tm.vector_field(args.vf).zeros) else 1e-3
        ok = abs(r["value"] - idx) <= tol
        rows = [r]
        if not args.json:
            print(f"# index_sum={idx} tolerance={tol:g} {'ok' if ok else 'MISMATCH'}", file=sys.stderr)
    else:
        rep = tm.aj_projection_check(args.t, tuple(int(x) for x in args.so3_grid.split("x")), args.vf)
        if not rep["agree"]:
            print("warning: projection-form check did not converge; "
                  f"lhs={rep['lhs']:.6f} rhs={rep['rhs']:.6f}", file=sys.stderr)
        _emit(_dump(rep) if args.json else
              f"lhs={rep['lhs']:.6f} rhs={rep['rhs']:.6f} fibre_volume={rep['fibre_volume']:.6f}", args.output)
        return 0
    if args.json:
        _emit(_dump({"rows": rows, "ok": ok}), args.output)
    else:
        _emit(_csv_rows(rows), args.output)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser


def _common(p, verify=False):
    p.add_argument("--json", action="store_true", help="deterministic JSON output")
    p.add_argument("--output", "-o", help="write output to a file")
    p.add_argument("--config", help="JSON file with defaults; explicit flags win")
    p.add_argument("--seed", type=int, help=f"base seed (default: ${SEED_ENV} or 0)")
    if verify:
        p.add_argument("--trials", type=int)
        p.add_argument("--cutoff", type=int)
        p.add_argument("--budget", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cohft", description="Exact checks for cohomological field theories.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("verify", help="run identity suites on a builtin theory")
    p.add_argument("theory")
    p.add_argument("--suite", default="all", choices=SUITE_NAMES + ("all",))
    p.add_argument("--timing", action="store_true", help="include duration_ms in JSON")
    _common(p, verify=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("expand", help="print the expansion of an action functional")
    p.add_argument("theory")
    p.add_argument("functional", choices=("min", "standard"))
    p.add_argument("--latex", action="store_true")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("export", help="theory JSON")
    p.add_argument("theory")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("audit", help="convention toggle audit over nilpotency and action")
    p.add_argument("--theories", help="comma-separated list (default: all builtins)")
    _common(p, verify=True)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("equivariant", help="Weil, Kalkman and Chern-Weil checks")
    esub = p.add_subparsers(dest="eq_cmd", required=True)
    q = esub.add_parser("check")
    q.add_argument("--g", default="su2")
    q.add_argument("--module", default="ce")
    q.add_argument("--truncate", dest="truncation", type=int)
    _common(q)
    q.set_defaults(func=cmd_equivariant)

    p = sub.add_parser("toy", help="zero-dimensional model on S²")
    tsub = p.add_subparsers(dest="toy_cmd", required=True)
    for name in ("euler", "ph", "sweep", "aj"):
        q = tsub.add_parser(name)
        q.add_argument("--vf", default="zero" if name in ("euler", "aj") else "grad-height")
        q.add_argument("--grid")
        q.add_argument("--ift", action="store_true", help="replace F by iF (for t > 0)")
        _common(q)
        q.set_defaults(func=cmd_toy)
        if name in ("euler", "aj"):
            q.add_argument("--t", type=float, default=0.0)
        if name == "ph":
            q.add_argument("--tmax", type=float, default=-1e4)
        if name == "sweep":
            q.add_argument("--ts", default="0,-1,-10,-100")
        if name == "aj":
            q.add_argument("--so3-grid", default="24x32x16")
    return ap


NUMERIC_FLAGS = ("--t", "--tmax", "--ts", "--seed")


def _join_negative_values(argv: list) -> list:
    """``--tmax -1e4`` becomes ``--tmax=-1e4``; argparse would take -1e4 for a flag."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in NUMERIC_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            try:
                [float(x) for x in argv[i + 1].split(",")]
            except ValueError:
                pass
            else:
                out.append(f"{a}={argv[i + 1]}")
                i += 2
                continue
        out.append(a)
        i += 1
    return out


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(_join_negative_values(list(sys.argv[1:] if argv is None else argv)))
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
