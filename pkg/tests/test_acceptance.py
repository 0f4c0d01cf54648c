"""Acceptance suite: one PASS/FAIL line per criterion, at the stated tolerances.

Run with ``pytest -v tests/test_acceptance.py``; the lines are printed even
when output capture is on.
"""

import math
import os
import time

import numpy as np
import pytest

from laglab.cli import (ExperimentConfig, cz_ratio_pair, main, riesz_identity_error,
                        run_blo_suite, run_kernel_validation, run_multiplier_suite,
                        run_theorem11, run_theorem12, run_variation_suite)
from laglab.gridquad import QuadratureSpec, build_grid
from laglab.specfun import laguerre_all

ALPHAS = (-0.4, 0.0, 0.5, 2.0)


@pytest.fixture
def report_line(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {title}: {detail}")
    return emit


def _check(rep, name):
    rows = [r for r in rep.rows if r["check"] == name]
    assert rows, name
    return rows


@pytest.fixture(scope="module")
def kernel_reports():
    return {a: run_kernel_validation(ExperimentConfig(alpha=a)) for a in ALPHAS}


@pytest.fixture(scope="module")
def blo_report():
    return run_blo_suite(ExperimentConfig())


@pytest.fixture(scope="module")
def variation_report():
    return run_variation_suite(ExperimentConfig())


def test_criterion_01_orthonormality(report_line):
    worst = 0.0
    for a in ALPHAS:
        g = build_grid(a, QuadratureSpec.for_degree(30, a))
        lk = laguerre_all(a, 15, g.nodes)
        gram = (lk * np.asarray(g.weights)) @ lk.T
        worst = max(worst, float(np.max(np.abs(gram - np.eye(16)))))
    ok = worst <= 1e-6
    report_line(1, "orthonormality j,k<=15, four alphas", ok, f"max |G - I| = {worst:.2e} (tol 1e-6)")
    assert ok


def test_criterion_02_heat_triple_agreement(report_line, kernel_reports):
    series = max(_check(r, "heat closed vs series")[0]["value"] for r in kernel_reports.values())
    srep = max(_check(r, "heat closed vs s-representation")[0]["value"]
               for r in kernel_reports.values())
    ok = series <= 1e-6 and srep <= 1e-6
    report_line(2, "heat kernel closed/series/s-representation", ok,
                f"series {series:.2e}, s-rep {srep:.2e} (tol 1e-6 relative)")
    assert ok


def test_criterion_03_semigroup(report_line, kernel_reports):
    err = max(_check(r, "semigroup")[0]["value"] for r in kernel_reports.values())
    ok = err <= 1e-4
    report_line(3, "semigroup W0.3 W0.2 = W0.5", ok, f"relative L2 error {err:.2e} (tol 1e-4)")
    assert ok


def test_criterion_04_eigenrelations(report_line, kernel_reports):
    eig = max(_check(r, "eigenrelation")[0]["value"] for r in kernel_reports.values())
    fd = max(_check(r, "laguerre operator finite difference")[0]["value"]
             for r in kernel_reports.values())
    ok = eig <= 1e-5 and fd <= 1e-4
    report_line(4, "eigenrelations", ok,
                f"heat {eig:.2e} (tol 1e-5), finite-difference operator {fd:.2e} (tol 1e-4)")
    assert ok


def test_criterion_05_riesz_spectral_identity(report_line):
    errs = {(a, x): riesz_identity_error(a, x, 1e-3) for a in (0.0, 0.5) for x in (0.5, 1.0, 2.0)}
    ok = all(e <= 1e-3 for e in errs.values())
    detail = ", ".join(f"a={a} x={x}: {e:.1e}" for (a, x), e in errs.items())
    report_line(5, "Riesz identity at eps=1e-3", ok, f"{detail} (tol 1e-3)")
    assert ok


def test_criterion_06_variation_dp_exact(report_line, variation_report):
    err = _check(variation_report, "dp vs brute force")[0]["value"]
    ok = err <= 1e-12
    report_line(6, "variation DP = brute force", ok, f"max difference {err:.1e} (tol 1e-12)")
    assert ok


def test_criterion_07_order_relations(report_line, variation_report):
    mono = _check(variation_report, "V_rho non-increasing in rho")[0]["value"]
    osc = _check(variation_report, "oscillation <= V_2")[0]["value"]
    ok = mono <= 1e-12 and osc <= 1e-12
    report_line(7, "V_rho monotone in rho and O <= V_2", ok,
                f"worst excess {mono:.1e} and {osc:.1e} (tol 1e-12)")
    assert ok


def test_criterion_08_maximal_identity_gap(report_line, blo_report):
    level0 = [r for r in _check(blo_report, "prop22 gap") if r["resolution"].startswith("level=0")]
    strict = _check(blo_report, "prop22 gap strictly decreasing")
    gaps = {r["subject"]: r["value"] for r in level0}
    not_strict = [r["subject"] for r in strict if r["ok"] is not True]
    ok = all(g <= 0.1 for g in gaps.values()) and not not_strict
    report_line(8, "M_a identity gap", ok,
                f"max level-0 gap {max(gaps.values()):.2e} (tol 0.1); "
                f"not strictly decreasing over 3 levels: {not_strict or 'none'}")
    assert ok


def test_criterion_09_containments(report_line, blo_report):
    a = max(r["value"] for r in _check(blo_report, "bmo <= 2 blo"))
    b = max(r["value"] for r in _check(blo_report, "blo <= 2 sup"))
    ok = a <= 1e-12 and b <= 1e-12
    report_line(9, "bmo <= 2 blo and blo <= 2 sup", ok,
                f"largest excesses {a:.3g} and {b:.3g} (must be <= 0)")
    assert ok


def test_criterion_10_riesz_variation_oscillation_bound(report_line):
    t0 = time.perf_counter()
    rep = run_theorem11(ExperimentConfig(family="random-steps", count=20, seed=7, alpha=0.0,
                                         a=1.0, rho=3.0, theta=2.0, refine=1))
    wall = time.perf_counter() - t0
    summary = {r["operator"]: r for r in rep.rows
               if r["index"] == "C_emp" and r["stability_ratio"] is not None}
    c0 = rep.constants["C_emp[all]@L0"]
    ratio = summary["all"]["stability_ratio"]
    ok = math.isfinite(c0) and 0.85 <= ratio <= 1.15 and wall <= 600
    per_op = ", ".join(f"{k} {v['stability_ratio']:.3f}" for k, v in summary.items() if k != "all")
    report_line(10, "random-steps empirical BLO bound", ok,
                f"C_emp {c0:.4f}, doubling ratio {ratio:.4f} (band [0.85,1.15]; {per_op}), "
                f"{wall:.0f} s")
    assert ok


def test_criterion_11_multiplier_bound(report_line):
    parts = []
    ok = True
    for name in ("exp", "imaginary-power:1"):
        rep = run_theorem12(ExperimentConfig(symbol=name))
        c0 = rep.constants["C_emp[all]@L0"]
        ratio = [r for r in rep.rows if r["index"] == "C_emp" and r["operator"] == "all"
                 and r["stability_ratio"] is not None][0]["stability_ratio"]
        ok = ok and math.isfinite(c0) and 0.85 <= ratio <= 1.15
        parts.append(f"{name}: C_emp {c0:.4f}, ratio {ratio:.4f}")
    report_line(11, "multiplier empirical BLO bound", ok, "; ".join(parts) + " (band [0.85,1.15])")
    assert ok


def test_criterion_12_multiplier_forms(report_line):
    dual, spec = 0.0, 0.0
    for a in (0.0, 0.5):
        rep = run_multiplier_suite(ExperimentConfig(alpha=a))
        dual = max(dual, max(r["value"] for r in _check(rep, "dual form")))
        spec = max(spec, max(r["value"] for r in _check(rep, "spectral cross-check")))
    ok = dual <= 1e-5 and spec <= 1e-3
    report_line(12, "multiplier dual form and spectral cross-check", ok,
                f"dual {dual:.1e} (tol 1e-5), spectral {spec:.1e} (tol 1e-3)")
    assert ok


def test_criterion_13_cz_ratio_stability(report_line):
    s1, s2 = cz_ratio_pair(0.0, 500, 7, "scaled")
    g1, g2 = cz_ratio_pair(0.0, 500, 7, "gradient")
    ds, dg = abs(s2 / s1 - 1), abs(g2 / g1 - 1)
    ok = ds <= 0.2 and dg <= 0.2
    report_line(13, "CZ ratios under sample doubling 500 -> 1000", ok,
                f"scaled {s1:.4f} -> {s2:.4f}, gradient {g1:.4f} -> {g2:.4f} (tol 20%)")
    assert ok


def test_criterion_14_determinism(report_line, tmp_path):
    fast = ["--grid-panels", "7", "--grid-geometric", "5", "--ladder-density", "10",
            "--count", "4"]
    same = []
    for sub, extra in (("theorem11", fast), ("theorem12", fast), ("kernels", []),
                       ("variation", []), ("multiplier", [])):
        blobs = []
        for k in range(2):
            out = str(tmp_path / f"{sub}{k}")
            main([sub, "--out", out, *extra])
            blobs.append(open(os.path.join(out, f"{sub}.csv"), "rb").read())
        same.append((sub, blobs[0] == blobs[1]))
    ok = all(s for _, s in same)
    report_line(14, "byte-identical CSV on rerun", ok,
                ", ".join(f"{s}: {'identical' if v else 'DIFFERENT'}" for s, v in same))
    assert ok
