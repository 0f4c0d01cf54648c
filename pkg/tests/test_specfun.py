import math

import numpy as np
import pytest
from scipy import integrate, special

from laglab.specfun import (DomainError, _bessel_scaled_asym, _bessel_scaled_series,
                            bessel_crossover, bessel_i_scaled, eigenvalue, gamma_fn, laguerre_all,
                            laguerre_derivative, laguerre_eval, log_gamma, reg_lower_inc_gamma)
from laglab.gridquad import QuadratureSpec, build_grid

ALPHAS = (-0.4, 0.0, 0.5, 2.0)


@pytest.mark.parametrize("x, expected", [(1.0, 1.0), (5.0, 24.0), (0.5, 1.772453850905516)])
def test_gamma_known_values(x, expected):
    assert gamma_fn(x) == pytest.approx(expected, rel=1e-13)


def test_gamma_matches_scipy_on_range():
    x = np.linspace(0.1, 50.0, 400)
    assert np.max(np.abs(gamma_fn(x) / special.gamma(x) - 1)) <= 1e-13


def test_log_gamma_large_arguments():
    for x in (60.0, 250.0, 1e4):
        assert log_gamma(x) == pytest.approx(special.gammaln(x), rel=1e-13)


def test_gamma_domain():
    with pytest.raises(DomainError):
        gamma_fn(0.0)
    with pytest.raises(DomainError):
        gamma_fn(-1.5)


def test_incomplete_gamma_values():
    assert reg_lower_inc_gamma(1.0, 0.0) == 0.0
    assert reg_lower_inc_gamma(1.0, 1.0) == pytest.approx(1 - math.exp(-1), rel=1e-13)
    quad, _ = integrate.quad(lambda u: u ** 1.5 * math.exp(-u), 0, 3.7, epsabs=1e-14, epsrel=1e-14)
    assert reg_lower_inc_gamma(2.5, 3.7) == pytest.approx(quad / math.gamma(2.5), abs=1e-10)


def test_incomplete_gamma_monotone_and_limits():
    rng = np.random.default_rng(1)
    for s in rng.uniform(0.1, 20, 30):
        x = np.sort(rng.uniform(0, 60, 50))
        p = np.array([reg_lower_inc_gamma(s, v) for v in x])
        assert np.all(np.diff(p) >= 0)
        assert np.all((p >= 0) & (p <= 1))
    assert reg_lower_inc_gamma(3.0, 1e4) == pytest.approx(1.0, abs=1e-15)


def test_incomplete_gamma_domain():
    with pytest.raises(DomainError):
        reg_lower_inc_gamma(0.0, 1.0)
    with pytest.raises(DomainError):
        reg_lower_inc_gamma(1.0, -1.0)


def test_bessel_examples():
    assert bessel_i_scaled(0.0, 0.0) == pytest.approx(1.0)
    closed = math.exp(-2) * math.sqrt(2 / (2 * math.pi)) * math.sinh(2)
    assert bessel_i_scaled(0.5, 2.0) == pytest.approx(closed, rel=1e-13)
    z = 500.0
    asym = 1 / math.sqrt(2 * math.pi * z) * (1 - 3 / (8 * z) - 15 / (128 * z * z))
    assert bessel_i_scaled(1.0, z) == pytest.approx(asym, rel=1e-8)


@pytest.mark.parametrize("nu", [0.0, 0.25, 1.0, 2.5])
def test_bessel_branch_seam(nu):
    zc = bessel_crossover(nu)
    z = np.linspace(0.8 * zc, 1.2 * zc, 20)
    s = np.array([_bessel_scaled_series(nu, v) for v in z], dtype=float).ravel()
    a = np.array([_bessel_scaled_asym(nu, v) for v in z], dtype=float).ravel()
    assert np.max(np.abs(s / a - 1)) <= 1e-11


def test_bessel_against_scipy_and_no_overflow():
    z = np.concatenate([np.linspace(0, 80, 200)[1:], [1e3, 1e5, 1e6]])
    assert bessel_i_scaled(-0.4, 0.0) == math.inf
    assert bessel_i_scaled(0.0, 0.0) == pytest.approx(1.0, rel=1e-15) and bessel_i_scaled(0.7, 0.0) == 0.0
    for nu in (-0.4, 0.0, 0.7, 3.0):
        got = bessel_i_scaled(nu, z)
        assert np.all(np.isfinite(got))
        assert np.max(np.abs(got / special.ive(nu, z) - 1)) <= 1e-12


def test_laguerre_closed_forms():
    for a in ALPHAS:
        assert laguerre_eval(a, 0, 1.7) == pytest.approx(1.0)
    x = np.linspace(0, 3, 7)
    assert np.allclose(laguerre_eval(0.5, 1, x), (1.5 - x * x) / math.sqrt(1.5), rtol=1e-14,
                       atol=1e-14)
    assert np.allclose(laguerre_derivative(0.5, 1, x[1:]), -2 * x[1:] / math.sqrt(1.5),
                       rtol=1e-14)
    assert np.all(laguerre_derivative(2.0, 0, x[1:]) == 0)


def test_laguerre_rodrigues_coefficients():
    # L_k^a(u) = sum_i (-1)^i binom(k + a, k - i) u^i / i!
    x = np.linspace(0.05, 3, 17)
    for a in ALPHAS:
        for k in range(6):
            u = x * x
            classical = sum((-1) ** i * special.binom(k + a, k - i) * u ** i / math.factorial(i)
                            for i in range(k + 1))
            norm = math.sqrt(math.gamma(a + 1) * math.factorial(k) / math.gamma(a + k + 1))
            got = laguerre_eval(a, k, x)
            assert np.max(np.abs(got - norm * classical) / np.maximum(1, np.abs(got))) <= 1e-12


def test_laguerre_derivative_finite_difference():
    h = 1e-5
    fd = (laguerre_eval(2.0, 7, 1.3 + h) - laguerre_eval(2.0, 7, 1.3 - h)) / (2 * h)
    assert laguerre_derivative(2.0, 7, 1.3) == pytest.approx(fd, rel=1e-7)


def test_laguerre_high_degree_stable():
    v = laguerre_all(0.5, 200, np.linspace(0, 30, 11))
    assert np.all(np.isfinite(v))


@pytest.mark.parametrize("alpha", ALPHAS)
def test_orthonormality(alpha):
    g = build_grid(alpha, QuadratureSpec.for_degree(30, alpha))
    lk = laguerre_all(alpha, 15, g.nodes)
    gram = (lk * np.asarray(g.weights)) @ lk.T
    assert np.max(np.abs(gram - np.eye(16))) <= 1e-6


def test_eigenvalue():
    assert eigenvalue(0.5, 3) == 7.5
