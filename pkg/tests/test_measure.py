import math

import numpy as np
import pytest
from scipy import integrate

from laglab.measure import (AdmissibleInterval, doubling_ratio, doubling_ratio_sup,
                            gamma_alpha_density, gamma_alpha_mass, is_admissible, m_alpha_mass,
                            m_of, sample_admissible_intervals)
from laglab.specfun import DomainError


def test_m_of():
    assert m_of(0.5) == 1 and m_of(1.0) == 1 and m_of(4.0) == 0.25
    x = np.linspace(0.01, 50, 1000)
    assert np.all(np.diff(m_of(x)) <= 0)
    assert np.allclose(m_of(x) * np.maximum(1, x), 1, rtol=1e-15, atol=0)
    with pytest.raises(DomainError):
        m_of(0.0)


@pytest.mark.parametrize("alpha", [-0.4, 0.0, 0.5, 2.0])
def test_total_mass(alpha):
    assert gamma_alpha_mass(alpha, 0.0, math.inf) == pytest.approx(1.0, abs=1e-12)


def test_gamma_mass_closed_form_and_quadrature():
    for b in (0.1, 1.0, 2.5):
        assert gamma_alpha_mass(0.0, 0.0, b) == pytest.approx(1 - math.exp(-b * b), rel=1e-13)
    quad, _ = integrate.quad(lambda x: gamma_alpha_density(1.5, x), 0.5, 2.0, epsabs=1e-14,
                             epsrel=1e-14)
    assert gamma_alpha_mass(1.5, 0.5, 2.0) == pytest.approx(quad, abs=1e-10)


def test_gamma_mass_bad_bounds():
    with pytest.raises(DomainError):
        gamma_alpha_mass(0.0, 2.0, 1.0)


def test_m_alpha_mass_examples():
    assert m_alpha_mass(-0.45, 1.0, 0.5) == pytest.approx((1.5 ** 1.1 - 0.5 ** 1.1) / 1.1)
    assert m_alpha_mass(0.0, 2.0, 1.0) == pytest.approx(4.0)
    assert m_alpha_mass(0.0, 1.0, 2.0) == pytest.approx(4.5)


def test_m_alpha_mass_additivity():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a, x, r = rng.uniform(-0.45, 3), rng.uniform(0.01, 5), rng.uniform(0.01, 5)
        p = 2 * a + 2
        left = (x ** p - max(x - r, 0) ** p) / p
        right = ((x + r) ** p - x ** p) / p
        assert m_alpha_mass(a, x, r) == pytest.approx(left + right, rel=1e-12)


def test_admissibility():
    assert is_admissible(1, 1, 1)
    assert not is_admissible(1, 4, 0.3)
    assert is_admissible(2, 4, 0.3)
    with pytest.raises(DomainError):
        AdmissibleInterval(4.0, 0.3, 1.0)


def test_doubling_examples():
    iv = AdmissibleInterval(1.0, 0.5, 1.0)
    expected = (1 - math.exp(-4)) / (math.exp(-0.25) - math.exp(-2.25))
    assert doubling_ratio(0.0, iv) == pytest.approx(expected, rel=1e-12)
    small = AdmissibleInterval(0.8, 1e-4, 1.0)
    assert doubling_ratio(-0.45, small) == pytest.approx(2.0, rel=1e-3)


def test_doubling_sup_stable_under_sample_doubling():
    rng = np.random.default_rng(11)
    s1 = sample_admissible_intervals(1.0, 10_000, rng)
    s2 = s1 + sample_admissible_intervals(1.0, 10_000, rng)
    d1, d2 = doubling_ratio_sup(0.5, 1.0, s1), doubling_ratio_sup(0.5, 1.0, s2)
    assert math.isfinite(d1)
    assert 0.9 <= d2 / d1 <= 1.1


def test_sampled_intervals_are_admissible():
    rng = np.random.default_rng(0)
    for iv in sample_admissible_intervals(2.0, 500, rng):
        assert 0 < iv.r0 <= min(iv.x0, 2.0 * m_of(iv.x0)) * (1 + 1e-12)
