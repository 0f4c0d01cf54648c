"""Local/global splitting of the Riesz kernel in product-formula coordinates.

Points are triples (x, y, s) with s in (-1, 1). The local region L_tau
collects the triples with sqrt(q_-(x, y, s)) <= a (1 + alpha) tau / (1 + x + y),
and a cutoff equal to 1 on L_1 and 0 on G_2 (the complement of L_2)
splits the Riesz kernel into a local Calderon-Zygmund part and a global
remainder dominated by an explicit majorant.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

from .heat import pi_alpha, q_pm
from .measure import m_alpha_mass
from .specfun import _check_alpha, log_gamma

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class RegionParams:
    """alpha, the region constant a (the admissibility scale) and the scale tau."""

    alpha: float
    a: float = 1.0
    tau: float = 1.0

    def __post_init__(self):
        _check_alpha(self.alpha)
        if not (self.a > 0 and self.tau > 0):
            raise ValueError("a and tau must be positive")

    def bound(self, x, y):
        """Right-hand side a (1 + alpha) tau / (1 + x + y)."""
        return self.a * (1.0 + self.alpha) * self.tau / (1.0 + x + y)


@dataclass(frozen=True)
class CutoffSpec:
    """Smoothstep cutoff profile.

    Parameters
    ----------
    order : {"cubic", "quintic"}
        3u^2 - 2u^3 (continuously differentiable) or 6u^5 - 15u^4 + 10u^3
        (twice continuously differentiable).
    width : float
        The transition runs from u = 1 to u = 1 + width, with width in
        (0, 1]; width -> 0 approaches the indicator of L_1.
    """

    order: str = "cubic"
    width: float = 1.0

    def __post_init__(self):
        if self.order not in ("cubic", "quintic"):
            raise ValueError("order must be 'cubic' or 'quintic'")
        if not 0 < self.width <= 1:
            raise ValueError("width must lie in (0, 1]")


DEFAULT_CUTOFF = CutoffSpec()


def in_region_L(rp, x, y, s):
    """Membership of (x, y, s) in L_tau (vectorized).

    Examples
    --------
    >>> bool(in_region_L(RegionParams(0.0), 10.0, 10.0, -1 + 1e-9))
    False
    """
    qm, _ = q_pm(x, y, s)
    return np.sqrt(qm) <= rp.bound(np.asarray(x, float), np.asarray(y, float))


def in_region_G(rp, x, y, s):
    return ~in_region_L(rp, x, y, s)


def normalized_u(alpha, a, x, y, s):
    """u = sqrt(q_-) (1 + x + y) / (a (1 + alpha)); L_1 is u <= 1, G_2 is u > 2."""
    qm, _ = q_pm(x, y, s)
    return np.sqrt(qm) * (1.0 + np.asarray(x, float) + np.asarray(y, float)) / (a * (1.0 + alpha))


def smoothstep(v, order="cubic"):
    """Profile rising from 0 at v <= 0 to 1 at v >= 1."""
    v = np.clip(v, 0.0, 1.0)
    if order == "cubic":
        return v * v * (3.0 - 2.0 * v)
    return v ** 3 * (v * (6.0 * v - 15.0) + 10.0)


def _cutoff_from_u(u, cs):
    return 1.0 - smoothstep((u - 1.0) / cs.width, cs.order)


def cutoff_phi(alpha, x, y, s, a=1.0, cs=DEFAULT_CUTOFF):
    """Cutoff in [0, 1]: 1 on L_1, 0 on G_2, smooth in between.

    Examples
    --------
    >>> float(cutoff_phi(0.0, 1.0, 1.0, 1.0 - 1e-12))
    1.0
    """
    return _cutoff_from_u(normalized_u(alpha, a, x, y, s), cs)


def cutoff_gradient_ratio(alpha, x, y, s, a=1.0, cs=DEFAULT_CUTOFF, rel_step=1e-6):
    """(|d_x phi| + |d_y phi|) sqrt(q_-) by central differences, per point."""
    x, y, s = (np.asarray(v, float) for v in (x, y, s))
    hx, hy = rel_step * np.maximum(x, 1e-3), rel_step * np.maximum(y, 1e-3)
    dx = (cutoff_phi(alpha, x + hx, y, s, a, cs) - cutoff_phi(alpha, x - hx, y, s, a, cs)) / (2 * hx)
    dy = (cutoff_phi(alpha, x, y + hy, s, a, cs) - cutoff_phi(alpha, x, y - hy, s, a, cs)) / (2 * hy)
    qm, _ = q_pm(x, y, s)
    return (np.abs(dx) + np.abs(dy)) * np.sqrt(qm)


def log_global_majorant_K(alpha, x, y, s):
    """log K(x, y, s) of the global majorant."""
    x, y, s = np.broadcast_arrays(*(np.asarray(v, float) for v in (x, y, s)))
    qm, qp = q_pm(x, y, s)
    if np.any(qm <= 0):
        raise ValueError("global majorant is singular where q_- = 0")
    pos = 0.5 * (alpha + 1.0) * (np.log(qp) - np.log(qm)) + 0.5 * (x * x + y * y - np.sqrt(qm * qp))
    return np.where(s < 0, 0.0, pos)


def global_majorant_K(alpha, x, y, s):
    """K(x, y, s) = 1 for s < 0, (q_+/q_-)^((alpha+1)/2) exp((x^2+y^2-sqrt(q_- q_+))/2) else.

    Examples
    --------
    >>> float(global_majorant_K(0.0, 1.0, 2.0, -0.5))
    1.0
    """
    out = np.exp(log_global_majorant_K(alpha, x, y, s))
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# s-quadrature
# ---------------------------------------------------------------------------

def _pi_const(alpha):
    return math.exp(float(log_gamma(alpha + 1.0) - log_gamma(alpha + 0.5)) - 0.5 * math.log(math.pi))


def _s_rule(alpha, x, y, s_lo, breaks_u, a, n_neg=80, seg_len=1.0, n_seg=12, depth=14.0):
    """Nodes and weights (including Pi_alpha) on (s_lo, 1).

    The part s < 0 uses Gauss-Jacobi for (1 + s)^(alpha - 1/2). On s >= 0
    the variable w = log(1 - s) resolves the scale (x - y)^2 / (2xy) on
    which q_- varies; the piece 1 - s < exp(w_min) is added as a lumped
    node at its Pi-weighted mean, where the integrand is constant to
    relative order exp(-depth).
    """
    c = _pi_const(alpha)
    nodes, weights = [], []
    if s_lo < 0.0:
        tj, wj = roots_jacobi(n_neg, 0.0, alpha - 0.5)
        lo = max(s_lo, -1.0)
        if lo <= -1.0:
            s = -0.5 + 0.5 * tj
            w = wj * 0.5 ** (alpha + 0.5) * (1.0 - s) ** (alpha - 0.5) * c
        else:
            gx, gw = np.polynomial.legendre.leggauss(n_neg)
            s = 0.5 * lo + 0.5 * (-lo) * gx
            w = 0.5 * (-lo) * gw * pi_alpha(alpha, s)
        nodes.append(s)
        weights.append(w)
    sigma_top = min(1.0, 1.0 - s_lo)
    w_top = math.log(sigma_top)
    scale = (x - y) ** 2 / (2.0 * x * y)
    w_min = min(math.log(max(scale, 1e-300)) - depth, w_top - depth)
    cuts = {w_min, w_top}
    for u_b in breaks_u:
        # 1 - s where u(s) = u_b
        sig = ((u_b * a * (1.0 + alpha) / (1.0 + x + y)) ** 2 - (x - y) ** 2) / (2.0 * x * y)
        if sig > 0 and w_min < math.log(sig) < w_top:
            cuts.add(math.log(sig))
    cuts = sorted(cuts)
    gx, gw = np.polynomial.legendre.leggauss(n_seg)
    for w0, w1 in zip(cuts[:-1], cuts[1:]):
        k = max(1, int(math.ceil((w1 - w0) / seg_len)))
        edges = np.linspace(w0, w1, k + 1)
        for e0, e1 in zip(edges[:-1], edges[1:]):
            wv = 0.5 * (e0 + e1) + 0.5 * (e1 - e0) * gx
            sig = np.exp(wv)
            nodes.append(1.0 - sig)
            weights.append(0.5 * (e1 - e0) * gw * c * sig ** (alpha + 0.5)
                           * (2.0 - sig) ** (alpha - 0.5))
    # lumped piece 0 < 1 - s < sigma0
    sig0 = math.exp(w_min)
    mass = c * 2.0 ** (alpha - 0.5) * sig0 ** (alpha + 0.5) / (alpha + 0.5)
    nodes.append(np.array([1.0 - sig0 * (alpha + 0.5) / (alpha + 1.5)]))
    weights.append(np.array([mass]))
    return np.concatenate(nodes), np.concatenate(weights)


def _riesz_s_integrand(alpha, x, y, s, scaled, h=0.2, left_margin=1.5, t_max_scale=40.0):
    """t-integral R(x, y, s) (without cutoff) for arrays of s, by log-t trapezoid.

    With ``scaled`` the factor e^{y^2} is omitted.
    """
    s = np.asarray(s, float)
    qm0, _ = q_pm(x, y, s)
    v_hi = math.log(t_max_scale / (alpha + 1.0))
    v_lo = np.minimum(np.log(np.maximum(qm0, 1e-300) / 90.0) - left_margin, v_hi - 2.0)
    n = int(math.ceil((v_hi - np.min(v_lo)) / h)) + 1
    frac = np.linspace(0.0, 1.0, n)[None, :]
    v = v_lo[:, None] + (v_hi - v_lo[:, None]) * frac
    step = (v_hi - v_lo) / (n - 1)
    t = np.exp(v)
    one_r = -np.expm1(-2.0 * t)
    ex = np.exp(-t)
    lin = ex * x - y * s[:, None]
    qm = lin * lin + y * y * (1.0 - s[:, None] ** 2)
    logmag = (-t * (alpha + 2.0) - (alpha + 2.0) * np.log(one_r) - qm / one_r
              + 0.5 * v + (0.0 if scaled else y * y))
    g = -(2.0 / _SQRT_PI) * lin * np.exp(logmag)
    g[:, 0] *= 0.5
    g[:, -1] *= 0.5
    return np.sum(g, axis=1) * step


def local_riesz_kernel(alpha, x, y, a=1.0, cs=DEFAULT_CUTOFF, scaled=False, cutoff=True):
    """Local Riesz kernel: int_{-1}^{1} R(x, y, s) phi(x, y, s) Pi_alpha(s) ds.

    Parameters
    ----------
    alpha, x, y : float
        x != y.
    a : float
        Region constant.
    cs : CutoffSpec
    scaled : bool
        Return e^{-y^2} times the kernel.
    cutoff : bool
        With False the cutoff is replaced by 1 and the full Riesz kernel
        is recovered, which is how this routine is validated.
    """
    alpha = _check_alpha(alpha)
    if abs(x - y) < 1e-12:
        raise ValueError("local kernel is singular on the diagonal")
    if cutoff:
        top = (1.0 + cs.width) * a * (1.0 + alpha) / (1.0 + x + y)
        sigma_max = (top * top - (x - y) ** 2) / (2.0 * x * y)
        if sigma_max <= 0:
            return 0.0
        s_lo = 1.0 - sigma_max
        breaks = (1.0,)
    else:
        s_lo, breaks = -1.0, ()
    s, w = _s_rule(alpha, x, y, s_lo, breaks, a)
    vals = _riesz_s_integrand(alpha, x, y, s, scaled)
    if cutoff:
        vals = vals * cutoff_phi(alpha, x, y, s, a, cs)
    return float(np.sum(w * vals))


def global_majorant_integral(alpha, x, y, a=1.0, n=400):
    """int K(x, y, s) chi_{G_1}(x, y, s) Pi_alpha(s) ds.

    The G_1 slice is {s < s_1} with s_1 the L_1 boundary, so Gauss-Jacobi
    on (-1, 0) and Gauss-Legendre in log(1 - s) on the rest suffice.
    """
    rp = RegionParams(alpha, a, 1.0)
    top = rp.bound(x, y)
    sig1 = (top * top - (x - y) ** 2) / (2.0 * x * y)
    s1 = 1.0 if sig1 <= 0 else 1.0 - sig1
    if s1 <= -1.0:
        return 0.0
    c = _pi_const(alpha)
    tj, wj = roots_jacobi(n, 0.0, alpha - 0.5)
    total = 0.0
    hi_neg = min(0.0, s1)
    s = -1.0 + 0.5 * (hi_neg + 1.0) * (1.0 + tj)
    w = wj * (0.5 * (hi_neg + 1.0)) ** (alpha + 0.5) * (1.0 - s) ** (alpha - 0.5) * c
    total += float(np.sum(w * global_majorant_K(alpha, x, y, s)))
    if s1 > 0:
        w_lo, w_hi = math.log(1.0 - s1) if s1 < 1.0 else math.log(max((x - y) ** 2 / (2 * x * y), 1e-300)) - 14.0, 0.0
        gx, gw = np.polynomial.legendre.leggauss(n)
        wv = 0.5 * (w_lo + w_hi) + 0.5 * (w_hi - w_lo) * gx
        sig = np.exp(wv)
        ss = 1.0 - sig
        wts = 0.5 * (w_hi - w_lo) * gw * c * sig ** (alpha + 0.5) * (2.0 - sig) ** (alpha - 0.5)
        total += float(np.sum(wts * global_majorant_K(alpha, x, y, ss)))
    return total


def cz_size_ratio(alpha, x, y, a=1.0, cs=DEFAULT_CUTOFF):
    """sup over pairs of |e^{-y^2} R_loc(x, y)| m_alpha(I(x, |x - y|))."""
    vals = [abs(local_riesz_kernel(alpha, xi, yi, a, cs, scaled=True))
            * float(m_alpha_mass(alpha, xi, abs(xi - yi))) for xi, yi in zip(x, y)]
    return max(vals) if vals else 0.0


def _five_point(func, h):
    """Fourth-order central difference of func at 0."""
    return (8.0 * (func(h) - func(-h)) - (func(2 * h) - func(-2 * h))) / (12.0 * h)


def cz_gradient_ratio(kernel, x, y, measure, rel_step=1e-3, components="both"):
    """sup of finite-difference gradient * |x - y| * measure(x, |x - y|).

    Parameters
    ----------
    kernel : callable
        Scalar two-point kernel k(x, y).
    x, y : array_like
        Sample pairs, x != y.
    measure : callable
        ``measure(x, r)``, e.g. m_alpha(I(x, r)).
    rel_step : float
        Central-difference step as a fraction of |x - y|.
    components : {"both", "x"}
        |d_x k| + |d_y k|, or |d_x k| alone.
    """
    if not 0 < rel_step <= 0.05:
        raise ValueError("finite-difference step must be at most 0.05 |x - y|")
    best = 0.0
    for xi, yi in zip(np.asarray(x, float), np.asarray(y, float)):
        d = abs(xi - yi)
        # the stencil reaches 2h; keep it inside (0, inf)
        g = abs(_five_point(lambda e: kernel(xi + e, yi), min(rel_step * d, 0.25 * xi)))
        if components == "both":
            g += abs(_five_point(lambda e: kernel(xi, yi + e), min(rel_step * d, 0.25 * yi)))
        best = max(best, g * d * float(measure(xi, d)))
    return best


__all__ = [
    "CutoffSpec", "DEFAULT_CUTOFF", "RegionParams", "cutoff_gradient_ratio", "cutoff_phi",
    "cz_gradient_ratio", "cz_size_ratio", "global_majorant_K", "global_majorant_integral",
    "in_region_G", "in_region_L", "local_riesz_kernel", "log_global_majorant_K",
    "normalized_u", "smoothstep",
]
