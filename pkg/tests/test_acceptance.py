"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; every tolerance is pinned here.
"""

import json
import time

import numpy as np
import pytest

from condfield.cli import main as cli_main
from condfield.concentration import sweep, verify_prop1, verify_prop3
from condfield.covariance import (
    Exponential,
    RankK,
    SquaredExponential,
    assemble,
    sqrt_factor,
)
from condfield.functionals import make_point_functional
from condfield.grid import inner, make_grid
from condfield.sampling import (
    COMPLEX,
    RANDOM,
    REAL,
    ConditionSpec,
    sample_conditional,
    substream,
)


def report(name, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, f"{name}: {detail}"


def acceptance_sweep(m, seed=0):
    g = make_grid(0, 1, m)
    cov = assemble(SquaredExponential(1, 0.2), g)
    fac = sqrt_factor(cov)
    t = make_point_functional(g, 0.5)
    return sweep(fac, t, cov, [10, 100, 1000, 10000], 200, scalar=COMPLEX,
                 mode="fixed-rho", rho=1.0, theta=0.0, seed=seed)


def test_criterion_1_operator_factorization():
    start = time.perf_counter()
    g = make_grid(0, 1, 128)
    cov = assemble(SquaredExponential(1, 0.2), g)
    fac = sqrt_factor(cov)
    elapsed = time.perf_counter() - start
    resid = np.linalg.norm(fac.s @ fac.s - cov.op) / np.linalg.norm(cov.op)
    report("criterion 1 (factorization residual)",
           resid <= 1e-10 and elapsed < 1.0,
           f"resid={resid:.2e} (<=1e-10), runtime={elapsed:.2f}s (<1s)")


def test_criterion_2_spectrum_ground_truth():
    g = make_grid(0, 1, 128)
    cov = assemble(RankK(((4.0, 1), (1.0, 3))), g)
    lam = np.sort(np.linalg.eigvalsh(cov.op))[::-1]
    ok = (abs(lam[0] - 4.0) < 1e-8 and abs(lam[1] - 1.0) < 1e-8
          and np.all(np.abs(lam[2:]) < 1e-10))
    report("criterion 2 (rank-K spectrum)", ok,
           f"leading={lam[0]:.10f},{lam[1]:.10f}, max rest={np.max(np.abs(lam[2:])):.2e}")


def test_criterion_3_prop1_surrogate():
    start = time.perf_counter()
    g = make_grid(0, 1, 128)
    cov = assemble(SquaredExponential(1, 0.2), g)
    t = make_point_functional(g, 0.5)
    res = verify_prop1(t, cov, 20000, seed=0)
    elapsed = time.perf_counter() - start
    ok = res["all_finite"] and abs(res["var_hat"] - 1.0) <= 0.05 and elapsed < 10.0
    report("criterion 3 (finiteness + variance)", ok,
           f"var_hat={res['var_hat']:.4f} (|.-1|<=0.05), runtime={elapsed:.1f}s (<10s)")


def test_criterion_4_conditioning_exactness():
    g = make_grid(0, 1, 128)
    cov = assemble(SquaredExponential(1, 0.2), g)
    fac = sqrt_factor(cov)
    t = make_point_functional(g, 0.5)
    ok = True
    worst = np.inf
    for scalar in (REAL, COMPLEX):
        spec = ConditionSpec(u=5.0, scalar=scalar, mode=RANDOM)
        for i in range(1000):
            s = sample_conditional(fac, t, spec, substream(100, i))
            val = inner(t.coeff, s.values, g)
            measured = abs(val) if scalar == COMPLEX else float(val.real
                                                                if np.iscomplexobj(val) else val)
            worst = min(worst, measured)
            ok = ok and measured >= 5.0 - 1e-9 * 5.0
    report("criterion 4 (conditioning event holds)", ok,
           f"2000/2000 samples, min |<T|phi_u>|={worst:.6f} >= 5")


def test_criterion_5_prop2_concentration():
    start = time.perf_counter()
    rep = acceptance_sweep(128)
    elapsed = time.perf_counter() - start
    med = {p["u"]: p["q50"] for p in rep.per_u}
    ok_a = -1.15 <= rep.slope <= -0.85
    ok_b = med[10000.0] <= med[10.0] / 500
    ok_c = rep.violations_est0 == 0 and len(rep.records) == 800
    ok_d = rep.violations_est12 == 0
    ok = ok_a and ok_b and ok_c and ok_d and elapsed < 60.0
    report("criterion 5 (prop 2 concentration)", ok,
           f"slope={rep.slope:.3f} in [-1.15,-0.85]; "
           f"median ratio={med[10.0] / med[10000.0]:.0f} (>=500); "
           f"est0 violations={rep.violations_est0}; "
           f"est12 violations={rep.violations_est12}; runtime={elapsed:.1f}s")


def test_criterion_6_discretization_insensitivity():
    rep128 = acceptance_sweep(128)
    rep256 = acceptance_sweep(256)
    changes = [
        abs(b["q50"] - a["q50"]) / a["q50"]
        for a, b in zip(rep128.per_u, rep256.per_u)
    ]
    ok = all(c < 0.05 for c in changes)
    report("criterion 6 (grid refinement)", ok,
           "per-u median changes " + ",".join(f"{c:.3f}" for c in changes) + " (<0.05)")


def test_criterion_7_prop3():
    res = verify_prop3(SquaredExponential(1, 0.3), 0.5, 1, 4, 1e6, m=256,
                       mode="fixed-rho", rho=1.0, theta=0.0, seed=0)
    warn = verify_prop3(Exponential(1, 0.5), 0.5, 1, 4, 1e6, m=256, seed=0)
    ok = (res["profile_sup_dist"] <= 1e-3 and res["sample_sup_dist"] <= 1e-2
          and warn["smoothness_warning"])
    report("criterion 7 (prop 3 derivative profile)", ok,
           f"profile dist={res['profile_sup_dist']:.2e} (<=1e-3), "
           f"sample dist={res['sample_sup_dist']:.2e} (<=1e-2), "
           f"exponential-kernel warning={warn['smoothness_warning']}")


def test_criterion_8_determinism(tmp_path):
    args = ["sweep", "--u-list", "10,100,1000,10000", "--mc", "50",
            "--kernel", "sqexp:1:0.2", "--functional", "point:0.5",
            "--mode", "fixed-rho:1", "--seed", "11", "--grid", "128"]
    out1, out2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
    code1 = cli_main(args + ["--out", str(out1)])
    code2 = cli_main(args + ["--out", str(out2)])
    same_csv = out1.read_bytes() == out2.read_bytes()
    same_json = (tmp_path / "r1.json").read_bytes() == (tmp_path / "r2.json").read_bytes()
    ok = code1 == 0 and code2 == 0 and same_csv and same_json
    report("criterion 8 (byte-identical reruns)", ok,
           f"csv identical={same_csv}, json identical={same_json}")


def test_criterion_9_norm_inequality(tmp_path):
    out = tmp_path / "r.csv"
    assert cli_main(["sweep", "--u-list", "10,100,1000", "--mc", "100",
                     "--seed", "2", "--grid", "128", "--out", str(out)]) == 0
    import csv as csvmod

    with open(out, newline="") as fh:
        rows = list(csvmod.DictReader(fh))
    worst = max(float(r["l2_dist"]) - float(r["sup_dist"]) for r in rows)
    ok = all(float(r["l2_dist"]) <= float(r["sup_dist"]) + 1e-12 for r in rows)
    report("criterion 9 (l2 <= sqrt(b-a) * sup per record)", ok,
           f"{len(rows)} records, max(l2 - sup)={worst:.2e} (<=1e-12)")
