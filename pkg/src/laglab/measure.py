"""The Laguerre measure, the admissibility scale m(x) and admissible intervals."""

import math
from dataclasses import dataclass

import numpy as np

from .specfun import DomainError, _check_alpha, log_gamma, reg_lower_inc_gamma


def m_of(x):
    """Admissibility scale m(x) = min(1, 1/x) for x > 0."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise DomainError("m(x) requires x > 0")
    res = np.minimum(1.0, 1.0 / xa)
    return float(res) if xa.ndim == 0 else res


def gamma_alpha_density(alpha, x):
    """Density 2 exp(-x^2) x^(2 alpha + 1) / Gamma(alpha + 1)."""
    alpha = _check_alpha(alpha)
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        logd = math.log(2.0) - x * x + (2 * alpha + 1) * np.log(x) - log_gamma(alpha + 1.0)
    return np.exp(logd)


def _log_upper_tail(s, x):
    """log Q(s, x) = log(1 - P(s, x)), with the continued fraction for large x."""
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return -math.inf
    if x < s + 1.0:
        return math.log1p(-reg_lower_inc_gamma(s, x))
    log_pref = -x + s * math.log(x) - float(log_gamma(s))
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return log_pref + math.log(h)


def log_gamma_alpha_mass(alpha, lo, hi):
    """log of the Laguerre measure of (lo, hi); finite far into the tail."""
    alpha = _check_alpha(alpha)
    lo, hi = float(lo), float(hi)
    if not (0.0 <= lo <= hi):
        raise DomainError("need 0 <= lo <= hi")
    if lo == hi:
        return -math.inf
    s = alpha + 1.0
    u_lo, u_hi = lo * lo, hi * hi
    if u_lo < s + 1.0 and u_hi < s + 1.0:
        return math.log(reg_lower_inc_gamma(s, u_hi) - reg_lower_inc_gamma(s, u_lo))
    q_lo = _log_upper_tail(s, u_lo)
    q_hi = _log_upper_tail(s, u_hi)
    return q_lo + math.log1p(-math.exp(q_hi - q_lo))


def gamma_alpha_mass(alpha, lo, hi):
    """Laguerre measure of (lo, hi) from the incomplete gamma function.

    Parameters
    ----------
    alpha : float
        Order, alpha > -1/2.
    lo, hi : float
        Bounds with 0 <= lo <= hi; hi may be inf.

    Returns
    -------
    float
        P(alpha+1, hi^2) - P(alpha+1, lo^2).
    """
    return math.exp(log_gamma_alpha_mass(alpha, lo, hi))


def m_alpha_mass(alpha, x, r):
    """Measure x^(2 alpha + 1) dx of I(x, r) = (x - r, x + r) cut at 0."""
    alpha = _check_alpha(alpha)
    x = np.asarray(x, dtype=float)
    r = np.asarray(r, dtype=float)
    p = 2.0 * alpha + 2.0
    return ((x + r) ** p - np.maximum(x - r, 0.0) ** p) / p


def is_admissible(a, x0, r0, rtol=1e-12):
    """True iff r0 <= x0 and r0 <= a m(x0) (up to a relative rounding slack)."""
    if a <= 0 or x0 <= 0 or r0 <= 0:
        raise DomainError("a, x0, r0 must be positive")
    bound = min(x0, a * m_of(x0))
    return r0 <= bound * (1.0 + rtol)


@dataclass(frozen=True)
class AdmissibleInterval:
    """Interval (x0 - r0, x0 + r0) with 0 < r0 <= min(x0, a m(x0))."""

    x0: float
    r0: float
    a: float

    def __post_init__(self):
        if not is_admissible(self.a, self.x0, self.r0):
            raise DomainError(f"interval ({self.x0}, {self.r0}) is not admissible for a={self.a}")

    @property
    def lo(self):
        return self.x0 - self.r0

    @property
    def hi(self):
        return self.x0 + self.r0

    @property
    def m(self):
        return m_of(self.x0)


def max_admissible_radius(a, x0):
    """Largest admissible radius at center x0."""
    return np.minimum(x0, a * m_of(x0))


def sample_admissible_intervals(a, n, rng):
    """Random admissible intervals.

    Centers are log-uniform on [1e-2, 1e2], radii uniform on
    (0, max admissible radius].
    """
    x0 = np.exp(rng.uniform(math.log(1e-2), math.log(1e2), size=n))
    rmax = max_admissible_radius(a, x0)
    r0 = rmax * (1.0 - rng.uniform(0.0, 1.0, size=n))
    return [AdmissibleInterval(float(c), float(r), float(a)) for c, r in zip(x0, r0)]


def doubling_ratio(alpha, interval):
    """gamma_alpha(I(x0, 2 r0)) / gamma_alpha(I(x0, r0)), with I cut at 0."""
    x0, r0 = interval.x0, interval.r0
    big = log_gamma_alpha_mass(alpha, max(x0 - 2 * r0, 0.0), x0 + 2 * r0)
    small = log_gamma_alpha_mass(alpha, x0 - r0, x0 + r0)
    return math.exp(big - small)


def doubling_ratio_sup(alpha, a, sample):
    """Largest doubling ratio over a sample of admissible intervals."""
    best = 0.0
    for iv in sample:
        if not is_admissible(a, iv.x0, iv.r0):
            raise DomainError("sample contains a non-admissible interval")
        best = max(best, doubling_ratio(alpha, iv))
    return best
