import math

import numpy as np
import pytest

from laglab.gridquad import (GridFunction, QuadratureSpec, ResolutionError, build_grid,
                             gamma_panel_rule, integrate, interval_average, interval_essinf,
                             l1_norm, l2_norm)
from laglab.measure import AdmissibleInterval, gamma_alpha_mass
from laglab.specfun import laguerre_eval

ALPHAS = (-0.4, 0.0, 0.5, 2.0)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_build_grid_examples(alpha):
    g = build_grid(alpha)
    assert integrate(g.with_values(np.ones(len(g)))) == pytest.approx(1.0, abs=1e-10)
    l1 = laguerre_eval(alpha, 1, g.nodes)
    assert integrate(g.with_values(l1 * l1)) == pytest.approx(1.0, abs=1e-6)
    assert integrate(g.with_values(laguerre_eval(alpha, 2, g.nodes))) == pytest.approx(0, abs=1e-6)
    assert np.all(np.diff(g.nodes) > 0) and g.nodes[0] > 0 and g.nodes[-1] <= 8.0


def test_second_moment_alpha0():
    g = build_grid(0.0)
    assert integrate(g.with_values(np.asarray(g.nodes) ** 2)) == pytest.approx(1.0, abs=1e-8)


def test_integrate_constants():
    g = build_grid(0.5)
    assert integrate(g.with_values(np.zeros(len(g)))) == 0
    assert integrate(g.with_values(np.full(len(g), 3.25))) == pytest.approx(3.25, abs=1e-10)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_refinement_convergence_polynomials(alpha):
    spec = QuadratureSpec.for_degree(30, alpha)
    g1, g2 = build_grid(alpha, spec), build_grid(alpha, spec.refined(1))
    for deg in (0, 5, 15, 30):
        v1 = integrate(g1.with_values(np.asarray(g1.nodes) ** (2 * deg)))
        v2 = integrate(g2.with_values(np.asarray(g2.nodes) ** (2 * deg)))
        assert abs(v1 - v2) <= 1e-8 * max(1.0, abs(v2))


def test_moments_exact():
    # int x^(2n) dgamma_alpha = Gamma(alpha + 1 + n) / Gamma(alpha + 1)
    for alpha in ALPHAS:
        g = build_grid(alpha, QuadratureSpec.for_degree(10, alpha))
        for n in range(6):
            exact = math.gamma(alpha + 1 + n) / math.gamma(alpha + 1)
            got = integrate(g.with_values(np.asarray(g.nodes) ** (2 * n)))
            assert got == pytest.approx(exact, rel=1e-10)


def test_fejer_grid_nested_and_accurate():
    base = QuadratureSpec(rule="fejer2")
    g0, g1 = build_grid(0.5, base), build_grid(0.5, base.nested(1))
    assert np.all(np.isin(np.asarray(g0.nodes), np.asarray(g1.nodes)))
    for g in (g0, g1):
        assert integrate(g.with_values(np.ones(len(g)))) == pytest.approx(1.0, abs=1e-12)
        c = integrate(g.with_values(np.cos(np.asarray(g.nodes))))
        assert c == pytest.approx(integrate(g1.with_values(np.cos(np.asarray(g1.nodes)))),
                                  abs=1e-12)
    with pytest.raises(ValueError):
        QuadratureSpec().nested(1)


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(points=1)
    with pytest.raises(ValueError):
        QuadratureSpec(rule="simpson")


def test_panel_rule_against_exact_mass():
    for alpha in ALPHAS:
        # x^(2 alpha + 1) is not polynomial: geometric convergence in n
        exact = gamma_alpha_mass(alpha, 0.3, 1.7)
        x, w = gamma_panel_rule(alpha, 0.3, 1.7, n=12)
        assert np.sum(w) == pytest.approx(exact, rel=1e-10)
        x, w = gamma_panel_rule(alpha, 0.3, 1.7, n=20)
        assert np.sum(w) == pytest.approx(exact, rel=1e-14)
        x, w = gamma_panel_rule(alpha, 0.0, 0.5, n=12)
        assert np.sum(w) == pytest.approx(gamma_alpha_mass(alpha, 0.0, 0.5), rel=1e-12)


def test_interval_average_examples():
    g = build_grid(0.0, QuadratureSpec(rule="fejer2").nested(2))
    iv = AdmissibleInterval(1.0, 0.5, 1.0)
    assert interval_average(g.with_values(np.full(len(g), 2.5)), iv) == pytest.approx(2.5)
    # indicator of the left half; the grid average is a nodal proxy
    ind = g.with_values((np.asarray(g.nodes) < 1.0).astype(float))
    exact = gamma_alpha_mass(0, 0.5, 1.0) / gamma_alpha_mass(0, 0.5, 1.5)
    assert interval_average(ind, iv) == pytest.approx(exact, abs=0.02)


def test_interval_average_linear_small_interval():
    g = build_grid(0.0, QuadratureSpec(n_uniform=400))
    x0, r0 = 3.0, 0.2
    f = g.with_values(2.0 * np.asarray(g.nodes) - 1.0)
    avg = interval_average(f, AdmissibleInterval(x0, r0, 1.0))
    assert abs(avg - (2 * x0 - 1)) <= 10 * r0 ** 2 * 2 + 1e-3


def test_interval_essinf_examples():
    g = build_grid(0.0)
    nodes = np.asarray(g.nodes)
    assert interval_essinf(g.with_values(np.full(len(g), -1.5)), AdmissibleInterval(1, 0.5, 1)) \
        == -1.5
    iv = AdmissibleInterval(1.5, 0.5, 2.0)
    inside = nodes[(nodes > 1) & (nodes < 2)]
    assert interval_essinf(g.with_values(nodes), iv) == pytest.approx(inside[0])
    assert abs(inside[0] - 1.0) < 0.1
    iv = AdmissibleInterval(1.0, 0.5, 1.0)
    f = g.with_values(laguerre_eval(0.0, 1, nodes))
    dense = np.linspace(0.5, 1.5, 200001)
    sel = nodes[(nodes > 0.5) & (nodes < 1.5)]
    assert interval_essinf(f, iv) == pytest.approx(np.min(laguerre_eval(0.0, 1, sel)), abs=1e-12)
    assert interval_essinf(f, iv) - np.min(laguerre_eval(0.0, 1, dense)) < 0.05


def test_average_monotone_and_above_essinf():
    rng = np.random.default_rng(2)
    g = build_grid(0.5)
    for _ in range(50):
        f = rng.standard_normal(len(g))
        h = f + np.abs(rng.standard_normal(len(g)))
        x0 = rng.uniform(0.05, 6)
        r0 = rng.uniform(0.1, 1) * min(x0, min(1, 1 / x0))
        iv = AdmissibleInterval(x0, r0, 1.0)
        try:
            af = interval_average(g.with_values(f), iv)
        except ResolutionError:
            continue
        assert af <= interval_average(g.with_values(h), iv) + 1e-12
        assert interval_essinf(g.with_values(f), iv) <= af + 1e-12


def test_norms_and_csv_roundtrip():
    g = build_grid(0.0)
    f = g.with_values(-np.ones(len(g)))
    assert l1_norm(f) == pytest.approx(1.0, abs=1e-10)
    assert l2_norm(f) == pytest.approx(1.0, abs=1e-10)
    back = GridFunction.from_csv(f.to_csv(), 0.0)
    assert np.array_equal(back.nodes, f.nodes) and np.array_equal(back.values, f.values)
