"""Special functions built from scratch.

Gamma (real and complex), the regularized lower incomplete gamma function,
exponentially scaled modified Bessel functions of the first kind, and the
orthonormal Laguerre polynomials in the variable x**2.

All array-valued routines accept scalars or numpy arrays and broadcast.
"""

import math

import numpy as np


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_P = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _lanczos_sum(zm1):
    acc = np.full_like(zm1, _LANCZOS_P[0])
    for i in range(1, len(_LANCZOS_P)):
        acc = acc + _LANCZOS_P[i] / (zm1 + i)
    return acc


def _log_gamma_lanczos(z):
    # valid for Re z >= 0.5
    zm1 = z - 1.0
    t = zm1 + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm1 + 0.5) * np.log(t) - t + np.log(_lanczos_sum(zm1))


def gamma_fn(x):
    """Gamma function.

    Real arguments must be positive. Complex arguments are accepted when
    the real part is positive (used for the imaginary-power symbols).

    Parameters
    ----------
    x : float, complex or array_like
        Argument.

    Returns
    -------
    float, complex or ndarray
        Gamma(x). Overflows to inf above x ~ 171.6, use `log_gamma` there.

    Raises
    ------
    DomainError
        If a real argument is <= 0 or a complex one has Re <= 0.
    """
    z = np.asarray(x)
    scalar = z.ndim == 0
    is_complex = np.iscomplexobj(z)
    z = np.atleast_1d(z).astype(complex if is_complex else float)
    if np.any(np.real(z) <= 0) or np.any(np.isnan(z)):
        raise DomainError("gamma_fn requires a positive (real part of the) argument")
    out = np.empty_like(z)
    small = np.real(z) < 0.5
    if np.any(small):
        # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        zs = z[small]
        out[small] = np.pi / (np.sin(np.pi * zs) * np.exp(_log_gamma_lanczos(1.0 - zs)))
    big = ~small
    if np.any(big):
        zb = z[big]
        zm1 = zb - 1.0
        t = zm1 + _LANCZOS_G + 0.5
        direct = np.real(zb) < 140.0
        res = np.empty_like(zb)
        # product form is more accurate than exp(log) while it does not overflow
        td, zm1d = t[direct], zm1[direct]
        res[direct] = (math.sqrt(2.0 * math.pi) * td ** (zm1d + 0.5) * np.exp(-td)
                       * _lanczos_sum(zm1d))
        res[~direct] = np.exp(_log_gamma_lanczos(zb[~direct]))
        out[big] = res
    return out[0] if scalar else out


def log_gamma(x):
    """Natural logarithm of Gamma(x) for real x > 0.

    Parameters
    ----------
    x : float or array_like

    Returns
    -------
    float or ndarray
    """
    z = np.asarray(x, dtype=float)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    if np.any(z <= 0) or np.any(np.isnan(z)):
        raise DomainError("log_gamma requires x > 0")
    out = np.empty_like(z)
    small = z < 0.5
    out[small] = math.log(math.pi) - np.log(np.sin(np.pi * z[small])) - _log_gamma_lanczos(1.0 - z[small])
    out[~small] = _log_gamma_lanczos(z[~small])
    return float(out[0]) if scalar else out


def _inc_gamma_scalar(s, x, tol=1e-15, max_iter=10000):
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    log_pref = -x + s * math.log(x) - float(log_gamma(s))
    if x < s + 1.0:
        ap = s
        term = 1.0 / s
        acc = term
        for _ in range(max_iter):
            ap += 1.0
            term *= x / ap
            acc += term
            if abs(term) < abs(acc) * tol:
                break
        return min(1.0, acc * math.exp(log_pref))
    # modified Lentz for the upper tail
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, max_iter):
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
        if abs(delta - 1.0) < tol:
            break
    return max(0.0, 1.0 - math.exp(log_pref) * h)


def reg_lower_inc_gamma(s, x):
    """Regularized lower incomplete gamma function P(s, x).

    Series expansion for x < s + 1, continued fraction for the
    complement otherwise.

    Parameters
    ----------
    s : float
        Shape, s > 0.
    x : float or array_like
        Upper limit, x >= 0 (inf allowed).

    Returns
    -------
    float or ndarray
        Values in [0, 1].
    """
    s = float(s)
    if not s > 0:
        raise DomainError("reg_lower_inc_gamma requires s > 0")
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or np.any(np.isnan(xa)):
        raise DomainError("reg_lower_inc_gamma requires x >= 0")
    if xa.ndim == 0:
        return _inc_gamma_scalar(s, float(xa))
    flat = [_inc_gamma_scalar(s, float(v)) for v in xa.ravel()]
    return np.array(flat).reshape(xa.shape)


# ---------------------------------------------------------------------------
# Modified Bessel functions of the first kind
# ---------------------------------------------------------------------------

def bessel_crossover(nu):
    """Argument above which the asymptotic branch is used."""
    return 30.0 + 2.0 * nu * nu


def _check_nu(nu):
    nu = float(nu)
    if nu < -0.5:
        raise DomainError("Bessel order must be >= -1/2")
    return nu


def _bessel_norm_series(nu, z):
    """exp(-z) (z/2)**(-nu) I_nu(z) by the ascending series."""
    z = np.asarray(z, dtype=float)
    q = 0.25 * z * z
    term = np.exp(-z - float(log_gamma(nu + 1.0)))
    acc = term.copy()
    k = 0
    while True:
        k += 1
        term = term * q / (k * (k + nu))
        acc = acc + term
        if np.all(term <= 1e-17 * acc) or k > 2000:
            break
    return acc


def _asym_coeffs(nu, kmax=60):
    mu = 4.0 * nu * nu
    a = [1.0]
    for k in range(1, kmax):
        a.append(a[-1] * (mu - (2 * k - 1) ** 2) / (k * 8.0))
    return np.array(a)


def _asym_sum(nu, z, coeffs=None):
    """sum_k (-1)^k a_k(nu) / z^k, truncated at the smallest term."""
    if coeffs is None:
        coeffs = _asym_coeffs(nu)
    z = np.asarray(z, dtype=float)
    acc = np.ones_like(z)
    prev = np.full_like(z, np.inf)
    active = np.ones(z.shape, dtype=bool)
    zinv = 1.0 / z
    zk = np.ones_like(z)
    for k in range(1, len(coeffs)):
        zk = zk * zinv
        term = (-1) ** k * coeffs[k] * zk
        mag = np.abs(term)
        active = active & (mag < prev) & (mag > 1e-17 * np.abs(acc))
        if not np.any(active):
            break
        acc = acc + np.where(active, term, 0.0)
        prev = np.where(active, mag, prev)
    return acc


def _bessel_scaled_asym(nu, z):
    z = np.asarray(z, dtype=float)
    return _asym_sum(nu, z) / np.sqrt(2.0 * np.pi * z)


def _bessel_scaled_series(nu, z):
    z = np.asarray(z, dtype=float)
    with np.errstate(divide="ignore"):
        # I_nu(0) is 1, 0 or +inf according to the sign of nu
        pref = np.where(z > 0, (0.5 * z) ** nu, 1.0 if nu == 0 else (0.0 if nu > 0 else np.inf))
    return pref * _bessel_norm_series(nu, z)


def bessel_i_scaled(nu, z):
    """Exponentially scaled modified Bessel function exp(-z) I_nu(z).

    Parameters
    ----------
    nu : float
        Order, nu >= -1/2.
    z : float or array_like
        Argument, z >= 0.

    Returns
    -------
    float or ndarray

    Notes
    -----
    The ascending series is used below ``bessel_crossover(nu)`` and the
    Hankel large-argument expansion above it.
    """
    nu = _check_nu(nu)
    za = np.asarray(z, dtype=float)
    if np.any(za < 0) or np.any(np.isnan(za)):
        raise DomainError("bessel_i_scaled requires z >= 0")
    scalar = za.ndim == 0
    za = np.atleast_1d(za)
    out = np.empty_like(za)
    cut = bessel_crossover(nu)
    lo = za < cut
    if np.any(lo):
        out[lo] = _bessel_scaled_series(nu, za[lo])
    if np.any(~lo):
        out[~lo] = _bessel_scaled_asym(nu, za[~lo])
    return float(out[0]) if scalar else out


def log_bessel_i_norm(nu, z):
    """log( exp(-z) (z/2)**(-nu) I_nu(z) ), finite for all z >= 0.

    This normalized form tends to -log Gamma(nu+1) as z -> 0 and avoids
    both the underflow of (z/2)**nu and the overflow of I_nu.
    """
    nu = _check_nu(nu)
    za = np.atleast_1d(np.asarray(z, dtype=float))
    out = np.empty_like(za)
    cut = bessel_crossover(nu)
    lo = za < cut
    if np.any(lo):
        out[lo] = np.log(_bessel_norm_series(nu, za[lo]))
    if np.any(~lo):
        zh = za[~lo]
        out[~lo] = np.log(_asym_sum(nu, zh)) - 0.5 * np.log(2.0 * np.pi * zh) - nu * np.log(0.5 * zh)
    return out if np.ndim(z) else float(out[0])


def bessel_ratio_defect(nu, z):
    """1 - I_{nu+1}(z) / I_nu(z), accurate also when the ratio is near 1.

    In the asymptotic regime the difference of the two Hankel series is
    summed term by term, so no cancellation occurs for large z.
    """
    nu = _check_nu(nu)
    za = np.atleast_1d(np.asarray(z, dtype=float))
    out = np.empty_like(za)
    cut = bessel_crossover(nu + 1.0)
    lo = za < cut
    if np.any(lo):
        zl = za[lo]
        ratio = 0.5 * zl * _bessel_norm_series(nu + 1.0, zl) / _bessel_norm_series(nu, zl)
        out[lo] = 1.0 - ratio
    if np.any(~lo):
        zh = za[~lo]
        c0 = _asym_coeffs(nu)
        c1 = _asym_coeffs(nu + 1.0)
        diff = _asym_sum_pair(c0, c1, zh)
        out[~lo] = diff / _asym_sum(nu, zh, c0)
    return out if np.ndim(z) else float(out[0])


def _series_pair(nu, z):
    """Ascending series for N_nu(z) and N_{nu+1}(z) at once, grouped by size of z."""
    n0 = np.empty_like(z)
    n1 = np.empty_like(z)
    edges = (0.0, 2.0, 8.0, 20.0, np.inf)
    g0 = float(log_gamma(nu + 1.0))
    for lo_e, hi_e in zip(edges[:-1], edges[1:]):
        sel = (z >= lo_e) & (z < hi_e)
        if not np.any(sel):
            continue
        zs = z[sel]
        q = 0.25 * zs * zs
        t0 = np.exp(-zs - g0)
        t1 = t0 / (nu + 1.0)
        a0, a1 = t0.copy(), t1.copy()
        k = 0
        while True:
            k += 1
            t0 = t0 * q / (k * (k + nu))
            t1 = t1 * q / (k * (k + nu + 1.0))
            a0 += t0
            a1 += t1
            if np.all(t0 <= 1e-17 * a0) or k > 2000:
                break
        n0[sel], n1[sel] = a0, a1
    return n0, n1


def bessel_norm_and_defect(nu, z):
    """(log N_nu(z), 1 - I_{nu+1}(z)/I_nu(z)) for arrays z >= 0, sharing work.

    N_nu(z) = exp(-z) (z/2)**(-nu) I_nu(z). Agrees with
    ``log_bessel_i_norm`` and ``bessel_ratio_defect``.
    """
    nu = _check_nu(nu)
    za = np.asarray(z, dtype=float)
    logn = np.empty_like(za)
    delta = np.empty_like(za)
    lo = za < bessel_crossover(nu + 1.0)
    if np.any(lo):
        n0, n1 = _series_pair(nu, za[lo])
        logn[lo] = np.log(n0)
        delta[lo] = 1.0 - 0.5 * za[lo] * n1 / n0
    if np.any(~lo):
        zh = za[~lo]
        c0 = _asym_coeffs(nu)
        c1 = _asym_coeffs(nu + 1.0)
        s0 = _asym_sum(nu, zh, c0)
        logn[~lo] = np.log(s0) - 0.5 * np.log(2.0 * np.pi * zh) - nu * np.log(0.5 * zh)
        delta[~lo] = _asym_sum_pair(c0, c1, zh) / s0
    return logn, delta


def _asym_sum_pair(c0, c1, z):
    # sum_k (-1)^k (a_k(nu) - a_k(nu+1)) / z^k; the k = 0 terms cancel exactly
    acc = np.zeros_like(z)
    prev = np.full_like(z, np.inf)
    active = np.ones(z.shape, dtype=bool)
    zinv = 1.0 / z
    zk = np.ones_like(z)
    for k in range(1, len(c0)):
        zk = zk * zinv
        term = (-1) ** k * (c0[k] - c1[k]) * zk
        mag = np.abs(term)
        active = active & (mag < prev) & (mag > 1e-18 * np.abs(acc))
        if not np.any(active):
            break
        acc = acc + np.where(active, term, 0.0)
        prev = np.where(active, mag, prev)
    return acc


# ---------------------------------------------------------------------------
# Laguerre polynomials
# ---------------------------------------------------------------------------

def _check_alpha(alpha):
    alpha = float(alpha)
    if not alpha > -0.5:
        raise DomainError("alpha must exceed -1/2")
    return alpha


def classical_laguerre_all(alpha, kmax, u):
    """Classical L_k^alpha(u) for k = 0..kmax by three-term recurrence.

    Returns an array of shape (kmax+1,) + shape(u).
    """
    u = np.asarray(u, dtype=float)
    out = np.empty((kmax + 1,) + u.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = 1.0 + alpha - u
    for k in range(1, kmax):
        out[k + 1] = ((2 * k + 1 + alpha - u) * out[k] - (k + alpha) * out[k - 1]) / (k + 1)
    return out


def laguerre_norm(alpha, k):
    """sqrt(Gamma(alpha+1) k! / Gamma(k+alpha+1)), computed in log space."""
    k = np.asarray(k, dtype=float)
    return np.exp(0.5 * (log_gamma(alpha + 1.0) + log_gamma(k + 1.0) - log_gamma(k + alpha + 1.0)))


def laguerre_all(alpha, kmax, x):
    """Orthonormal polynomials L_k(x) = c_k L_k^alpha(x**2) for k = 0..kmax."""
    alpha = _check_alpha(alpha)
    x = np.asarray(x, dtype=float)
    raw = classical_laguerre_all(alpha, kmax, x * x)
    norms = laguerre_norm(alpha, np.arange(kmax + 1))
    return raw * norms.reshape((-1,) + (1,) * x.ndim)


def laguerre_eval(alpha, k, x):
    """Orthonormal Laguerre polynomial in x**2.

    Parameters
    ----------
    alpha : float
        Order, alpha > -1/2.
    k : int
        Degree, k >= 0.
    x : float or array_like
        Points, x >= 0.

    Returns
    -------
    float or ndarray
        c_k * L_k^alpha(x**2), orthonormal in L^2 of the Laguerre measure.

    Examples
    --------
    >>> round(laguerre_eval(0.5, 1, 1.0), 12) == round(0.5 / 1.5 ** 0.5, 12)
    True
    """
    k = int(k)
    if k < 0:
        raise DomainError("degree must be nonnegative")
    vals = laguerre_all(alpha, k, x)[k]
    return float(vals) if np.ndim(x) == 0 else vals


def laguerre_derivative(alpha, k, x):
    """d/dx of `laguerre_eval`, via (L_k^alpha)' = -L_{k-1}^{alpha+1}."""
    alpha = _check_alpha(alpha)
    k = int(k)
    if k < 0:
        raise DomainError("degree must be nonnegative")
    xa = np.asarray(x, dtype=float)
    if k == 0:
        res = np.zeros_like(xa)
    else:
        low = classical_laguerre_all(alpha + 1.0, k - 1, xa * xa)[k - 1]
        res = -2.0 * xa * low * laguerre_norm(alpha, k)
    return float(res) if xa.ndim == 0 else res


def eigenvalue(alpha, k):
    """lambda_k = 2k + alpha + 1."""
    return 2.0 * k + alpha + 1.0
