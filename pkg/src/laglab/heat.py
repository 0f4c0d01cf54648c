"""The Laguerre heat kernel against gamma_alpha and its derivatives.

Three independent representations are provided: the closed Bessel form,
the spectral series and the product-formula integral over s in (-1, 1).
All closed-form evaluation happens in log space. With r = exp(-2t),
z = xy / sinh t and N(z) = exp(-z) (z/2)^(-alpha) I_alpha(z),

    log W = log Gamma(alpha+1) - t(alpha+1) - (alpha+1) log(1-r)
            - (x-y)^2 / (2 sinh t) + (x^2+y^2) / (1+e^t) + log N(z),

which has no cancelling large terms for small t.
"""

import math

import numpy as np
from scipy.special import roots_jacobi

from .gridquad import GridFunction
from .specfun import (_check_alpha, bessel_norm_and_defect, eigenvalue, laguerre_all,
                      log_bessel_i_norm, log_gamma)


def q_pm(x, y, s):
    """Product-formula variables (q_minus, q_plus) = x^2 + y^2 -/+ 2xys."""
    x, y, s = (np.asarray(v, dtype=float) for v in (x, y, s))
    base = x * x + y * y
    cross = 2.0 * x * y * s
    # q_minus written as a sum of nonnegative terms where possible
    qm = (x - y) ** 2 + 2.0 * x * y * (1.0 - s)
    return qm, base + cross


def pi_alpha(alpha, s):
    """Gegenbauer product-formula density on (-1, 1), normalized to mass 1.

    Pi(s) = Gamma(alpha+1) / (Gamma(alpha+1/2) sqrt(pi)) (1 - s^2)^(alpha-1/2)
    """
    alpha = _check_alpha(alpha)
    s = np.asarray(s, dtype=float)
    c = math.exp(float(log_gamma(alpha + 1.0) - log_gamma(alpha + 0.5)) - 0.5 * math.log(math.pi))
    return c * (1.0 - s * s) ** (alpha - 0.5)


def _prep(t, x, y):
    t, x, y = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (t, x, y)))
    if np.any(t <= 0) or np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("t, x, y must be positive")
    return t, x, y


def _shared(alpha, t, x, y):
    t = np.minimum(t, 700.0)
    sh = np.sinh(t)
    z = x * y / sh
    return t, sh, z


def log_heat(alpha, t, x, y, shift=0.0):
    """log W_t(x, y) - shift, elementwise."""
    alpha = _check_alpha(alpha)
    t, x, y = _prep(t, x, y)
    t, sh, z = _shared(alpha, t, x, y)
    a1 = alpha + 1.0
    return (float(log_gamma(a1)) - t * a1 - a1 * np.log(-np.expm1(-2.0 * t))
            - (x - y) ** 2 / (2.0 * sh) + (x * x + y * y) / (1.0 + np.exp(t))
            + log_bessel_i_norm(alpha, z.ravel()).reshape(z.shape) - shift)


def heat_parts(alpha, t, x, y):
    """(log W, d/dx log W, d/dt log W), evaluated without cancellation.

    With delta = 1 - I_{alpha+1}(z)/I_alpha(z):

        d/dx log W = (y-x)/sinh t - x tanh(t/2) + x - y delta / sinh t
        d/dt log W = -(alpha+1) coth t + z delta coth t
                     + (x-y)^2 / (2 sinh^2 t) - xy / (2 cosh^2(t/2))
    """
    alpha = _check_alpha(alpha)
    t, x, y = _prep(t, x, y)
    t, sh, z = _shared(alpha, t, x, y)
    a1 = alpha + 1.0
    logn, delta = bessel_norm_and_defect(alpha, z)
    logw = (float(log_gamma(a1)) - t * a1 - a1 * np.log(-np.expm1(-2.0 * t))
            - (x - y) ** 2 / (2.0 * sh) + (x * x + y * y) / (1.0 + np.exp(t)) + logn)
    coth = 1.0 / np.tanh(t)
    gx = (y - x) / sh - x * np.tanh(0.5 * t) + x - y * delta / sh
    gt = (-a1 * coth + z * delta * coth + (x - y) ** 2 / (2.0 * sh * sh)
          - x * y / (2.0 * np.cosh(0.5 * t) ** 2))
    return logw, gx, gt


def _out(v, *args):
    return float(v) if all(np.ndim(a) == 0 for a in args) else v


def heat_closed(alpha, t, x, y):
    """Heat kernel W_t(x, y) against gamma_alpha(y), closed Bessel form.

    Parameters
    ----------
    alpha : float
    t, x, y : float or array_like
        Positive; broadcast together.

    Returns
    -------
    float or ndarray
        Positive kernel values, symmetric in (x, y).
    """
    return _out(np.exp(log_heat(alpha, t, x, y)), t, x, y)


def heat_dx(alpha, t, x, y):
    """Partial derivative of W_t(x, y) in x."""
    logw, gx, _ = heat_parts(alpha, t, x, y)
    return _out(np.exp(logw) * gx, t, x, y)


def heat_dt(alpha, t, x, y):
    """Partial derivative of W_t(x, y) in t."""
    logw, _, gt = heat_parts(alpha, t, x, y)
    return _out(np.exp(logw) * gt, t, x, y)


def heat_series(alpha, t, x, y, K=60):
    """Spectral partial sum sum_{k<=K} exp(-lambda_k t) L_k(x) L_k(y)."""
    alpha = _check_alpha(alpha)
    t, x, y = _prep(t, x, y)
    lx = laguerre_all(alpha, K, x)
    ly = laguerre_all(alpha, K, y)
    k = np.arange(K + 1).reshape((-1,) + (1,) * t.ndim)
    res = np.sum(np.exp(-eigenvalue(alpha, k) * t) * lx * ly, axis=0)
    return _out(res, t, x, y)


def _s_nodes(alpha, n):
    s, w = roots_jacobi(n, alpha - 0.5, alpha - 0.5)
    c = math.exp(float(log_gamma(alpha + 1.0) - log_gamma(alpha + 0.5)) - 0.5 * math.log(math.pi))
    return s, w * c


def heat_s_rep(alpha, t, x, y, n_s=None):
    """Heat kernel from the product-formula integral.

    W = (e^-t / (1-r))^(alpha+1) * integral over s of
        exp(-q_minus(e^-t x, y, s) / (1-r) + y^2) Pi(s) ds,

    with Gauss-Jacobi nodes for the weight (1-s^2)^(alpha-1/2). The
    exponent is rewritten as E - z(1-s) with E independent of s, so the
    integrand is at most 1. The node count grows like sqrt(z), which
    keeps the endpoint layer of width 1/z resolved.
    """
    alpha = _check_alpha(alpha)
    t, x, y = _prep(t, x, y)
    tt, sh, z = _shared(alpha, t, x, y)
    a1 = alpha + 1.0
    r1 = -np.expm1(-2.0 * tt)
    e = -(x - y) ** 2 / (2.0 * sh) + (x * x + y * y) / (1.0 + np.exp(tt))
    pref = a1 * (-tt - np.log(r1)) + e
    zf, pf = z.ravel(), pref.ravel()
    out = np.empty_like(zf)
    if n_s is None:
        counts = np.maximum(48, np.ceil(48 + 8.0 * np.sqrt(zf))).astype(int)
    else:
        counts = np.full(zf.shape, int(n_s))
    cache = {}
    for i, (zi, n) in enumerate(zip(zf, counts)):
        if n not in cache:
            cache[n] = _s_nodes(alpha, n)
        s, w = cache[n]
        out[i] = math.exp(pf[i]) * np.dot(w, np.exp(-zi * (1.0 - s)))
    return _out(out.reshape(z.shape), t, x, y)


def heat_matrix(alpha, t, nodes_out, grid):
    """Matrix K_ij = W_t(x_i, y_j) w_j for applying the semigroup."""
    xi = np.asarray(nodes_out, dtype=float)[:, None]
    yj = np.asarray(grid.nodes)[None, :]
    return heat_closed(alpha, t, xi, yj) * np.asarray(grid.weights)[None, :]


def apply_heat(f, t):
    """Semigroup action (W_t f)(x_i) = sum_j w_j W_t(x_i, x_j) f(x_j)."""
    if t <= 0:
        raise ValueError("t must be positive")
    mat = heat_matrix(f.alpha, t, f.nodes, f)
    return f.with_values(mat @ np.asarray(f.values))


def laguerre_operator(alpha, func, x, h=1e-4):
    """Central-difference application of the Laguerre operator.

    The operator is -1/2 f'' - ((2 alpha + 1)/(2x) - x) f' + (alpha + 1) f,
    for which the orthonormal polynomial of degree k has eigenvalue
    2k + alpha + 1.
    """
    x = np.asarray(x, dtype=float)
    fp, f0, fm = func(x + h), func(x), func(x - h)
    d1 = (fp - fm) / (2 * h)
    d2 = (fp - 2 * f0 + fm) / (h * h)
    return -0.5 * d2 - ((2 * alpha + 1) / (2 * x) - x) * d1 + (alpha + 1) * f0


__all__ = [
    "GridFunction", "apply_heat", "heat_closed", "heat_dt", "heat_dx", "heat_matrix",
    "heat_parts", "heat_s_rep", "heat_series", "laguerre_operator", "log_heat",
    "pi_alpha", "q_pm",
]
