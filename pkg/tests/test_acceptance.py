"""Acceptance criteria 1-12, one test each, with a summary line per criterion."""

import math
import random
import time
import warnings
from fractions import Fraction

import numpy as np
import pytest

from conftest import ACCEPTANCE
from cohft import toy_model as tm
from cohft.equivariant import equivariant_suite
from cohft.exact_core import GrassmannElement, determinant, odd_gaussian_integral, pfaffian
from cohft.field_calculus.observables import theta_K_expansion
from cohft.verifier import SuiteSpec, run_suite

THEORIES = ("dw", "sw_u1", "kw", "gsw_so3")
TRIALS = 20


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE[n] = line
    print(line)
    return ok


def failures(report):
    return [r["name"] for r in report.identities if r["status"] != "pass"]


@pytest.fixture(scope="module")
def dw_descent():
    return run_suite(SuiteSpec("descent", "dw", TRIALS))


def test_criterion_01_nilpotency():
    bad, slow = {}, {}
    for t in THEORIES:
        t0 = time.perf_counter()
        f = failures(run_suite(SuiteSpec("nilpotency", t, TRIALS)))
        dt = time.perf_counter() - t0
        if f:
            bad[t] = f
        if dt >= 120:
            slow[t] = round(dt, 1)
    ok = not bad and not slow
    assert record(1, ok, f"Q^2 = 0 on every field, {TRIALS} configs; failures={bad} over-budget={slow}")


def test_criterion_02_action_expansions():
    bad = {t: f for t in THEORIES if (f := failures(run_suite(SuiteSpec("action", t, TRIALS))))}
    assert record(2, not bad, f"action_min and action_standard match the displays; failures={bad}")


def test_criterion_03_vector_susy_gsw():
    f = failures(run_suite(SuiteSpec("vector-susy", "gsw_so3", TRIALS)))
    assert record(3, not f, f"[Q,K] = d and K S_min = 0 for gsw; failures={f}")


def test_criterion_04_descent(dw_descent):
    f = [n for n in failures(dw_descent) if n.startswith(("Q O^", "(d + (-1)^deg Q) O"))]
    assert record(4, not f, f"Q O^(p) = d O^(p-1) and total closedness for dw; failures={f}")


def test_criterion_05_theta_K_and_anomaly(dw_descent):
    structural = theta_K_expansion()["theta_K_structural"]
    bad = [n for n in failures(dw_descent) if n.startswith("anomaly")]
    ok = structural and not bad
    assert record(5, ok, f"exp(K)theta structural={structural}; anomaly failures={bad}")


def test_criterion_06_kw_complexification():
    f = failures(run_suite(SuiteSpec("kw", "kw", TRIALS)))
    rules = [n for n in f if n.startswith("simplified Q")]
    family = [n for n in f if "g* S_F = S_gF" in n]
    ok = not rules and not family
    assert record(6, ok, f"simplified rule failures={rules}; family action failures={family}")


def test_criterion_07_equivariant_suite():
    t0 = time.perf_counter()
    bad = {}
    for g in ("u1", "su2", "so3"):
        for m in ("ground", "ce", "weil"):
            r = equivariant_suite(g, m, 4)
            f = [k for k, v in r["checks"].items() if not v]
            if f:
                bad[f"{g}/{m}"] = f
    dt = time.perf_counter() - t0
    ok = not bad and dt < 60
    assert record(7, ok, f"3x3 grid at truncation 4 in {dt:.1f} s; failures={bad}")


def _antisym(rng, dim):
    M = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            x = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            M[i][j], M[j][i] = x, -x
    return M


def test_criterion_08_pfaffian_and_berezin():
    rng = random.Random(0)
    pf_bad = sum(pfaffian(M) ** 2 != determinant(M)
                 for M in (_antisym(rng, 2 * (k % 3 + 1)) for k in range(50)))
    gauss_bad, done = 0, 0
    while done < 20:
        dim = 2 * rng.randint(1, 2)
        M = _antisym(rng, dim)
        if determinant(M) == 0:
            continue
        n = dim + 2
        eta = [GrassmannElement.generator(1, n), GrassmannElement.generator(2, n)]
        B = [eta[0].scale(Fraction(rng.randint(-5, 5), 2)) + eta[1].scale(rng.randint(-5, 5)) for _ in range(dim)]
        r = odd_gaussian_integral(M, B, n=n, chi_offset=2)
        gauss_bad += not (r.expansion - r.closed_form).is_zero()
        done += 1
    ok = pf_bad == 0 and gauss_bad == 0
    assert record(8, ok, f"Pf^2 = det mismatches {pf_bad}/50; Gaussian closed form mismatches {gauss_bad}/20")


def test_criterion_09_gauss_bonnet():
    t0 = time.perf_counter()
    r = tm.euler_characteristic("zero", 0, (64, 128))
    s = tm.t_sweep("zero", [0, -1, -10, -100])
    dt = time.perf_counter() - t0
    err = abs(r["value"] - 2)
    ok = err < 1e-6 and s["spread"] < 1e-6 and dt < 60
    assert record(9, ok, f"chi = {r['value']:.12f} (error {err:.1e}), sweep spread {s['spread']:.1e}, {dt:.1f} s")


def test_criterion_10_poincare_hopf():
    ph = {}
    for vf, tol in (("grad-height", 1e-3), ("dipole", 5e-3)):
        v = tm.euler_characteristic(vf, -1e4)["value"]
        ph[vf] = (v, abs(v - tm.index_sum(vf)) < tol)
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(1000):
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        vf = ("grad-height", "rotation", "dipole")[rng.integers(3)]
        t = float(rng.uniform(-20, 0))
        try:
            e = tm.euler_form(vf, t, n, tol=math.inf)
        except ZeroDivisionError:
            continue
        if e["route_ii"] is not None:
            worst = max(worst, abs(e["route_i"] - e["route_ii"]))
    ok = all(p for _, p in ph.values()) and worst <= 1e-9
    vals = ", ".join(f"{k} {v:.6f}" for k, (v, _) in ph.items())
    assert record(10, ok, f"{vals} at t = -1e4 vs index 2; worst route gap {worst:.1e} on 1000 points")


def test_criterion_11_brst():
    bad = {}
    for t in THEORIES:
        f = failures(run_suite(SuiteSpec("brst", t, TRIALS)))
        if f:
            bad[t] = f
    assert record(11, not bad, f"S_BRST = int |F|^2 vol and Q_BRST^2 = 0; failures={bad}")


def test_criterion_12_projection_form():
    r = tm.aj_projection_check()
    rel = abs(r["lhs"] - r["rhs"]) / abs(r["rhs"])
    ok = rel < 0.05
    record(12, ok, f"lhs {r['lhs']:.6f} rhs {r['rhs']:.6f} relative gap {rel:.1e} (non-gating)")
    if not ok:
        warnings.warn(f"projection-form check off by {rel:.1%}: {r}")
