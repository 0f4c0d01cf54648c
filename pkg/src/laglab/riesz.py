"""The Riesz kernel, its truncations and the a-local maximal operator."""

import math
import warnings

import numpy as np
from scipy.stats import qmc

from .gridquad import punctured_rule
from .measure import m_alpha_mass, m_of
from .tquad import DEFAULT_TJOB, time_integral
from .truncation import RieszKernel, TruncatedOperator, TruncationLadder


class ResolutionWarning(UserWarning):
    """Too few nodes near the truncation radius to trust a grid sum."""


def riesz_kernel(alpha, x, y, job=DEFAULT_TJOB):
    """Riesz kernel (1/sqrt(pi)) int_0^inf dW_t/dx (x, y) t^(-1/2) dt.

    Parameters
    ----------
    alpha : float
    x, y : float or array_like
        Positive, x != y; broadcast together.
    job : TJob
        Log-time trapezoid parameters.

    Returns
    -------
    float or ndarray
    """
    xb, yb = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    v = time_integral(alpha, xb.ravel(), yb.ravel(), "riesz", job=job)
    return float(v[0]) if np.ndim(xb) == 0 else v.reshape(xb.shape)


def scaled_riesz_kernel(alpha, x, y, job=DEFAULT_TJOB):
    """exp(-(x^2 + y^2)/2) R(x, y), computed with the weight folded into the log."""
    xb, yb = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    xf, yf = xb.ravel(), yb.ravel()
    v = time_integral(alpha, xf, yf, "riesz", job=job, shift=0.5 * (xf * xf + yf * yf))
    return float(v[0]) if np.ndim(xb) == 0 else v.reshape(xb.shape)


def near_diagonal_sample(n, seed=0, x_range=(0.05, 6.0), rel_range=(1e-3, 1.0), edge_fraction=0.0):
    """Quasi-random pairs (x, y) with 0 < |x - y| <= m(x) and y > 0.

    x is log-uniform on ``x_range``; the offset is log-uniform on
    ``rel_range`` times cap = min(m(x), x) with a random sign. The first n
    points of a larger draw with the same seed are the same points, so
    doubling a sample keeps the original pairs.

    A fraction ``edge_fraction`` of the pairs instead takes cap minus the
    offset log-uniform, which puts y close to the far edge of the
    admissible range (y -> 0 when x < 1). Suprema of kernel ratios are
    often attained there and the log-uniform offset rarely reaches it.
    """
    sob = qmc.Sobol(d=4, scramble=True, seed=seed)
    u = sob.random(1 << max(0, (n - 1).bit_length()))[:n]
    lx0, lx1 = math.log(x_range[0]), math.log(x_range[1])
    x = np.exp(lx0 + (lx1 - lx0) * u[:, 0])
    lr0, lr1 = math.log(rel_range[0]), math.log(rel_range[1])
    cap = np.minimum(m_of(x), x)
    rel = np.exp(lr0 + (lr1 - lr0) * u[:, 1])
    edge = u[:, 3] < edge_fraction
    d = cap * np.where(edge, 1.0 - rel * (1.0 - rel_range[0]), rel)
    sign = np.where(u[:, 2] < 0.5, -1.0, 1.0)
    sign = np.where(edge & (cap >= x), -1.0, sign)
    # a full step to the left would leave (0, inf); stay inside
    d = np.where((sign < 0) & (d >= x), 0.999 * x, d)
    return x, x + sign * d


def scaled_kernel_ratio(alpha, x, y, job=DEFAULT_TJOB):
    """sup over pairs of |exp(-(x^2+y^2)/2) R(x, y)| * m_alpha(I(x, |x - y|))."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    vals = np.abs(scaled_riesz_kernel(alpha, x, y, job)) * m_alpha_mass(alpha, x, np.abs(x - y))
    return float(np.max(vals))


def _node_index(f, x):
    i = int(np.argmin(np.abs(f.nodes - x)))
    if abs(f.nodes[i] - x) > 1e-12 * max(1.0, abs(x)):
        raise ValueError(f"x = {x} is not a grid node")
    return i


def check_resolution(f, eps, x):
    """Warn when fewer than 4 nodes lie in eps < |y - x| < 2 eps."""
    d = np.abs(np.asarray(f.nodes) - x)
    count = int(np.count_nonzero((d > eps) & (d < 2 * eps)))
    if count < 4:
        warnings.warn(f"only {count} nodes in the shell eps < |y-x| < 2 eps at x={x:.6g}, "
                      f"eps={eps:.3g}", ResolutionWarning, stacklevel=3)
    return count


def truncated_at(kernel, f, eps, x, method="subtracted", warn=True):
    """Truncated operator int_{|x-y|>eps} K(x, y) f(y) dgamma(y) at a node.

    Parameters
    ----------
    kernel : callable
        Vectorized kernel with attribute ``alpha``.
    f : GridFunction
    eps : float
    x : float
        A node of f.
    method : {"subtracted", "plain"}
        ``plain`` is the node sum over |x_j - x| > eps. ``subtracted``
        adds f(x) times an accurately integrated T_eps 1(x) and sums
        K (f_j - f(x)) over the nodes, which removes the near-diagonal
        quadrature error whenever f is smooth around x.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    i = _node_index(f, x)
    if warn:
        check_resolution(f, eps, f.nodes[i])
    if method == "plain":
        y = np.asarray(f.nodes)
        keep = np.abs(y - y[i]) > eps
        if not np.any(keep):
            return 0.0
        vals = kernel(np.full(np.count_nonzero(keep), y[i]), y[keep])
        return np.sum(vals * f.weights[keep] * f.values[keep])
    if method != "subtracted":
        raise ValueError(f"unknown method {method!r}")
    op = TruncatedOperator(kernel, f, rows=[i], radii=[eps])
    return op.ladder_values(np.asarray(f.values))[0, 0]


def riesz_truncated(f, eps, x, job=DEFAULT_TJOB, method="subtracted", warn=True):
    """R_eps f(x) = int_{|x-y|>eps} R(x, y) f(y) dgamma_alpha(y) at a grid node.

    Examples
    --------
    >>> from laglab.gridquad import build_grid
    >>> g = build_grid(0.0)
    >>> riesz_truncated(g, 0.1, float(g.nodes[100]), warn=False)
    0.0
    """
    return float(np.real_if_close(truncated_at(RieszKernel(f.alpha, job), f, eps, x, method, warn)))


def riesz_truncated_callable(alpha, func, eps, x, job=DEFAULT_TJOB, x_max=8.0):
    """R_eps applied to a callable f, with a punctured Gauss rule in y.

    No grid is involved, so this is the reference for the grid operator.
    """
    y, w = punctured_rule(alpha, x, eps, x_max)
    k = time_integral(alpha, np.full_like(y, x), y, "riesz", job=job)
    return float(np.sum(k * w * func(y)))


def maximal_from_ladder(values):
    """sup over a ladder of |T_eps f(x)|."""
    v = np.abs(np.asarray(values))
    if v.size == 0:
        raise ValueError("empty ladder below a m(x)")
    return float(np.max(v))


def ladder_radii_below(ladder, a, x):
    """Ladder radii in (0, a m(x)]."""
    radii = ladder.below(a * m_of(x)) if isinstance(ladder, TruncationLadder) else \
        np.asarray(ladder)[np.asarray(ladder) <= a * m_of(x) * (1 + 1e-12)]
    if len(radii) == 0:
        raise ValueError("ladder has no radius at or below a m(x)")
    return np.asarray(radii)


def riesz_ladder_values(f, x, radii, job=DEFAULT_TJOB):
    """R_eps f(x) for every radius of a strictly decreasing list."""
    i = _node_index(f, x)
    op = TruncatedOperator(RieszKernel(f.alpha, job), f, rows=[i], radii=np.asarray(radii))
    return op.ladder_values(np.asarray(f.values))[0]


def riesz_maximal_local(f, a, x, ladder, job=DEFAULT_TJOB):
    """R_{*,a} f(x): max of |R_eps f(x)| over ladder radii eps <= a m(x).

    Parameters
    ----------
    f : GridFunction
    a : float
    x : float
        Grid node.
    ladder : TruncationLadder or array_like
    """
    radii = ladder_radii_below(ladder, a, x)
    return maximal_from_ladder(riesz_ladder_values(f, x, radii, job))


__all__ = [
    "ResolutionWarning", "RieszKernel", "TruncationLadder", "check_resolution",
    "ladder_radii_below", "maximal_from_ladder", "near_diagonal_sample", "riesz_kernel",
    "riesz_ladder_values", "riesz_maximal_local", "riesz_truncated", "riesz_truncated_callable",
    "scaled_kernel_ratio", "scaled_riesz_kernel", "truncated_at",
]
