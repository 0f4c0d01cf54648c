"""BMO_a and BLO_a seminorms over sampled admissible intervals.

An interval family is a finite sample of B_a: centers at grid nodes and
radii in geometric progression below the largest admissible radius,
restricted to intervals that stay inside the grid window and contain at
least MIN_NODES nodes. All per-interval statistics come from prefix sums
and a sparse table for minima, so whole families are scanned at once.
"""

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar
from scipy.special import roots_jacobi

from .gridquad import MIN_NODES, QuadratureSpec, ResolutionError, build_grid, l1_norm
from .measure import AdmissibleInterval, gamma_alpha_density, m_of
from .specfun import laguerre_eval, log_gamma


@dataclass(frozen=True)
class IntervalFamily:
    """Admissible intervals (x0 - r0, x0 + r0) with their node index ranges.

    Attributes
    ----------
    x0, r0 : ndarray
        Centers and radii.
    i0, i1 : ndarray of int
        Nodes with index in [i0, i1) lie in the closed interval.
    a : float
    """

    x0: np.ndarray
    r0: np.ndarray
    i0: np.ndarray
    i1: np.ndarray
    a: float
    per_decade: float = 12.0

    def __len__(self):
        return len(self.x0)

    def interval(self, k):
        return AdmissibleInterval(float(self.x0[k]), float(self.r0[k]), self.a)

    def containing(self, i):
        """Indices of the family intervals that contain node i."""
        return np.nonzero((self.i0 <= i) & (i < self.i1))[0]


def _anchored_top(x, a, x_max, side, iters=60):
    """Largest admissible r for intervals with one endpoint at x.

    side = -1: x is the right endpoint (center x - r);
    side = +1: x is the left endpoint (center x + r).
    Admissibility is monotone in r along each family, so bisection applies.
    """
    if side < 0:
        hi = np.minimum(0.5 * x, a)
    else:
        hi = np.minimum(0.5 * (x_max - x), a)
    lo = np.zeros_like(x)
    for _ in range(iters):
        r = 0.5 * (lo + hi)
        c = x + side * r
        ok = (c > 0) & (r <= np.minimum(c, a * np.minimum(1.0, 1.0 / np.maximum(c, 1e-300))))
        lo, hi = np.where(ok, r, lo), np.where(ok, hi, r)
    return lo


def build_family(grid, a, per_decade=12.0, min_nodes=MIN_NODES, center_stride=1, anchored=True):
    """Sample B_a on a grid.

    Parameters
    ----------
    grid : GridFunction
    a : float
    per_decade : float
        Radii per decade below the top admissible radius.
    min_nodes : int
        Intervals holding fewer nodes are dropped.
    center_stride : int
        Use every k-th node as a center or anchor.
    anchored : bool
        Besides intervals centered at nodes, include intervals having a
        node as an endpoint. M_a f(x) at a node x is then also maximized
        over intervals that end at x, which is where the sup in the
        BLO quantity is approached when the infimum sits at an endpoint.

    Returns
    -------
    IntervalFamily
    """
    nodes = np.asarray(grid.nodes)
    x_max = grid.x_max
    pts = nodes[::center_stride]
    n_steps = int(math.ceil(per_decade * 6))
    fac = 10.0 ** (-np.arange(n_steps) / per_decade)
    top = np.minimum(np.minimum(a * m_of(pts), pts), x_max - pts)
    x0s, r0s = [np.repeat(pts, n_steps)], [(top[:, None] * fac[None, :]).ravel()]
    if anchored:
        for side in (-1.0, 1.0):
            t = _anchored_top(pts, a, x_max, side)
            r = (t[:, None] * fac[None, :]).ravel()
            x0s.append(np.repeat(pts, n_steps) + side * r)
            r0s.append(r)
    x0, r0 = np.concatenate(x0s), np.concatenate(r0s)
    keep = r0 > 0
    x0, r0 = x0[keep], r0[keep]
    # closure membership: for continuous f the infimum over I is the
    # minimum over its closure, and a node sitting on an endpoint must
    # not flip in or out on rounding
    tol = 1e-12 * np.maximum(1.0, x0 + r0)
    i0 = np.searchsorted(nodes, x0 - r0 - tol, side="left")
    i1 = np.searchsorted(nodes, x0 + r0 + tol, side="right")
    keep = (i1 - i0) >= min_nodes
    if not np.any(keep):
        raise ResolutionError("no admissible interval holds enough nodes")
    return IntervalFamily(x0[keep], r0[keep], i0[keep], i1[keep], float(a), float(per_decade))


class _RangeMin:
    """Sparse table for range minima over [i0, i1)."""

    def __init__(self, v):
        v = np.asarray(v, dtype=float)
        self.levels = [v]
        k = 1
        while 2 * k <= len(v):
            prev = self.levels[-1]
            self.levels.append(np.minimum(prev[:-k], prev[k:]))
            k *= 2

    def query(self, i0, i1):
        n = i1 - i0
        j = np.floor(np.log2(n)).astype(int)
        out = np.empty(len(i0))
        for lev in np.unique(j):
            sel = j == lev
            tab = self.levels[lev]
            out[sel] = np.minimum(tab[i0[sel]], tab[i1[sel] - (1 << lev)])
        return out


def _range_sums(v, i0, i1):
    """sum(v[i0:i1]) for each pair; direct sums avoid prefix-sum cancellation."""
    v = np.concatenate([np.asarray(v, dtype=float), [0.0]])
    idx = np.empty(2 * len(i0), dtype=np.intp)
    idx[0::2], idx[1::2] = i0, i1
    out = np.add.reduceat(v, idx)[0::2]
    return np.where(i1 > i0, out, 0.0)


def _cell_bounds(f):
    y = np.asarray(f.nodes)
    return np.concatenate([[0.0], 0.5 * (y[1:] + y[:-1]), [f.x_max]])


def family_weights(f, family):
    """Cell overlaps of each family interval.

    Node j stands for the cell between the midpoints to its neighbours.
    Cells wholly inside an interval count fully; the two boundary cells
    count with the fraction of their length inside.

    Returns
    -------
    k0, k1 : ndarray of int
        First and last overlapping cell.
    f0, f1 : ndarray
        Fractions of cells k0 and k1 inside (f1 = 0 when k1 == k0).
    """
    b = _cell_bounds(f)
    n = len(b) - 1
    lo = family.x0 - family.r0
    hi = family.x0 + family.r0
    k0 = np.clip(np.searchsorted(b, lo, side="right") - 1, 0, n - 1)
    k1 = np.clip(np.searchsorted(b, hi, side="right") - 1, 0, n - 1)
    length = b[1:] - b[:-1]
    f0 = (np.minimum(b[k0 + 1], hi) - np.maximum(b[k0], lo)) / length[k0]
    f1 = np.where(k1 > k0, (hi - b[k1]) / length[k1], 0.0)
    return k0, k1, np.clip(f0, 0.0, 1.0), np.clip(f1, 0.0, 1.0)


def _weighted_sums(f, family, v):
    w = np.asarray(f.weights)
    k0, k1, f0, f1 = family_weights(f, family)
    inner = np.maximum(k1, k0 + 1)
    num = _range_sums(w * v, k0 + 1, inner) + f0 * w[k0] * v[k0] + f1 * w[k1] * v[k1]
    den = _range_sums(w, k0 + 1, inner) + f0 * w[k0] + f1 * w[k1]
    return num, den


def _panel_coefficients(f, v):
    """Chebyshev coefficients of the interpolant of v on every panel."""
    P = np.asarray(f.panels)
    n = len(f.nodes) // (len(P) - 1)
    nodes = np.asarray(f.nodes).reshape(-1, n)
    vals = np.asarray(v, dtype=float).reshape(-1, n)
    lo, hi = P[:-1, None], P[1:, None]
    s = (2.0 * nodes - (lo + hi)) / (hi - lo)
    coef = np.empty_like(vals)
    for p in range(len(vals)):
        coef[p] = np.linalg.solve(np.polynomial.chebyshev.chebvander(s[p], n - 1), vals[p])
    return coef


def _partial_panel_integrals(f, coef, panel, lo, hi, n_gauss=16):
    """Integrals over [lo, hi] inside ``panel`` of the panel interpolant and of 1."""
    P = np.asarray(f.panels)
    num = np.zeros(len(lo))
    den = np.zeros(len(lo))
    ok = hi > lo
    for p in np.unique(panel[ok]):
        sel = np.nonzero(ok & (panel == p))[0]
        a_, b_ = lo[sel], hi[sel]
        t, wt = _interval_rule(f.alpha, a_, b_, n_gauss // 2)
        s = (2.0 * t - (P[p] + P[p + 1])) / (P[p + 1] - P[p])
        num[sel] = np.sum(wt * np.polynomial.chebyshev.chebval(s, coef[p]), axis=1)
        den[sel] = np.sum(wt, axis=1)
    return num, den


def _panel_sums(f, family, v):
    """Integrals of v and 1 over each interval, via panel interpolants."""
    P = np.asarray(f.panels)
    npan = len(P) - 1
    n = len(f.nodes) // npan
    w = np.asarray(f.weights)
    lo = np.maximum(family.x0 - family.r0, 0.0)
    hi = np.minimum(family.x0 + family.r0, P[-1])
    p0 = np.clip(np.searchsorted(P, lo, side="right") - 1, 0, npan - 1)
    p1 = np.clip(np.searchsorted(P, hi, side="left") - 1, 0, npan - 1)
    inner = np.maximum(p1, p0 + 1)
    num = _range_sums(w * v, (p0 + 1) * n, inner * n)
    den = _range_sums(w, (p0 + 1) * n, inner * n)
    two = p1 > p0
    coef = _panel_coefficients(f, v)
    a0, b0 = _partial_panel_integrals(f, coef, p0, lo, np.where(two, P[p0 + 1], hi))
    a1, b1 = _partial_panel_integrals(f, coef, p1, np.where(two, P[p1], hi), hi)
    return num + a0 + a1, den + b0 + b1


def family_averages(f, family, method="interpolant"):
    """gamma_alpha-averages of f over every family interval.

    Parameters
    ----------
    f : GridFunction
    family : IntervalFamily
    method : {"interpolant", "cells"}
        ``interpolant`` reads the grid values as the per-panel polynomial
        interpolant and integrates the partial end panels to high order.
        ``cells`` is the positive functional of fractional cells; it is
        only first-order accurate but keeps averages monotone, which the
        seminorm identities rely on. Grids without panel data always use
        cells.
    """
    v = np.real(np.asarray(f.values))
    has_panels = f.panels is not None and len(f.nodes) % (len(f.panels) - 1) == 0
    if method == "interpolant" and has_panels:
        num, den = _panel_sums(f, family, v)
    elif method in ("interpolant", "cells"):
        num, den = _weighted_sums(f, family, v)
    else:
        raise ValueError(f"unknown method {method!r}")
    return num / den


def family_essinf(f, family):
    """Nodal minima of f over the closure of every family interval."""
    return _RangeMin(np.real(f.values)).query(family.i0, family.i1)


def _cell_min(f, family):
    """Minima over the nodes whose cells meet each interval."""
    k0, k1, _, _ = family_weights(f, family)
    return _RangeMin(np.real(f.values)).query(k0, k1 + 1)


@dataclass
class SeminormReport:
    """Result of a seminorm scan.

    Attributes
    ----------
    value : float
    argmax : AdmissibleInterval or None
    count : int
        Number of intervals scanned.
    stability_ratio : float or None
        Value at the refined level over the value at this level, when known.
    """

    value: float
    argmax: object
    count: int
    stability_ratio: float = None
    kind: str = field(default="")

    def csv_row(self):
        iv = self.argmax
        return [self.kind, repr(self.value), repr(iv.x0) if iv else "", repr(iv.r0) if iv else "",
                str(self.count), "" if self.stability_ratio is None else repr(self.stability_ratio)]

    @staticmethod
    def csv_header():
        return ["kind", "value", "argmax_x0", "argmax_r0", "count", "stability_ratio"]

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.csv_header())
        w.writerow(self.csv_row())
        return buf.getvalue()


def _report(vals, family, kind):
    k = int(np.argmax(vals))
    return SeminormReport(float(max(vals[k], 0.0)), family.interval(k), len(family), kind=kind)


def _check_family(f, family):
    if family.i1.max() > len(f.nodes):
        raise ValueError("interval family was built for a different grid")


def blo_seminorm(f, family):
    """sup over the family of the average of f minus its infimum on I.

    Averages are the fractional-cell functional and the infimum is the
    minimum over the nodes carrying weight in it, so blo(f + c) = blo(f)
    and bmo(f) <= 2 blo(f) hold exactly on the grid.

    Parameters
    ----------
    f : GridFunction
        Real values.
    family : IntervalFamily

    Returns
    -------
    SeminormReport
    """
    _check_family(f, family)
    vals = family_averages(f, family, "cells") - _cell_min(f, family)
    return _report(vals, family, "blo")


def bmo_seminorm(f, family, chunk=20000):
    """sup over the family of the gamma_alpha-average of |f - f_I| on I."""
    _check_family(f, family)
    v = np.real(np.asarray(f.values))
    w = np.asarray(f.weights)
    avg = family_averages(f, family, "cells")
    k0, k1, f0, f1 = family_weights(f, family)
    vals = np.empty(len(family))
    for s0 in range(0, len(family), chunk):
        sl = slice(s0, s0 + chunk)
        a_, b_ = k0[sl], k1[sl]
        width = int(np.max(b_ - a_)) + 1
        idx = a_[:, None] + np.arange(width)
        inside = idx <= b_[:, None]
        idx = np.minimum(idx, len(v) - 1)
        ww = np.where(inside, w[idx], 0.0)
        ww[:, 0] *= f0[sl]
        last = b_ - a_
        two = last > 0
        rows = np.nonzero(two)[0]
        ww[rows, last[two]] *= f1[sl][two]
        dev = np.abs(v[idx] - avg[sl][:, None])
        vals[sl] = np.sum(ww * dev, axis=1) / np.sum(ww, axis=1)
    return _report(vals, family, "bmo")


def bmo_norm(f, family):
    """Full norm: BMO seminorm plus the L^1(gamma_alpha) norm."""
    return bmo_seminorm(f, family).value + l1_norm(f)


def blo_norm(f, family):
    """Full norm: BLO seminorm plus the L^1(gamma_alpha) norm."""
    return blo_seminorm(f, family).value + l1_norm(f)


def natural_maximal_grid(f, family):
    """M_a f at every node: the largest family average over intervals containing it.

    Nodes contained in no family interval get NaN.
    """
    _check_family(f, family)
    avg = family_averages(f, family)
    out = np.full(len(f.nodes), -np.inf)
    order = np.argsort(avg, kind="stable")
    # later (larger) averages overwrite earlier ones
    for k in order:
        out[family.i0[k]:family.i1[k]] = avg[k]
    out[np.isneginf(out)] = np.nan
    return out


def natural_maximal(f, x, family):
    """M_a f(x) at a node x: max of family averages over intervals containing x."""
    i = int(np.argmin(np.abs(np.asarray(f.nodes) - x)))
    ks = family.containing(i)
    if len(ks) == 0:
        raise ValueError("no family interval contains x")
    return float(np.max(family_averages(f, family)[ks]))


def _jacobi_rule(alpha, b, n):
    """Gauss-Jacobi nodes/weights for int_0^b g dgamma_alpha, one row per b."""
    beta = 2.0 * alpha + 1.0
    sj, wj = roots_jacobi(n, 0.0, beta)
    b = np.asarray(b, dtype=float)[:, None]
    y = 0.5 * b * (1.0 + sj)
    c = 2.0 * math.exp(-float(log_gamma(alpha + 1.0)))
    return y, (0.5 * b) ** (beta + 1.0) * wj * c * np.exp(-y * y)


def _interval_rule(alpha, lo, hi, n=24):
    """Nodes/weights for the gamma_alpha integral on each [lo_k, hi_k].

    Intervals close to 0 (lo < (hi - lo)/4) use the difference of two
    Gauss-Jacobi rules on [0, hi] and [0, lo], which keeps the endpoint
    behaviour y^(2 alpha + 1) exact; the others use Gauss-Legendre.
    Every row has 2n points.
    """
    lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
    gx, gw = np.polynomial.legendre.leggauss(2 * n)
    y = 0.5 * (lo + hi)[:, None] + 0.5 * (hi - lo)[:, None] * gx
    w = 0.5 * (hi - lo)[:, None] * gw * gamma_alpha_density(alpha, y)
    near = lo < 0.25 * (hi - lo)
    if np.any(near):
        yh, wh = _jacobi_rule(alpha, hi[near], n)
        yl, wl = _jacobi_rule(alpha, lo[near], n)
        y[near] = np.concatenate([yh, yl], axis=1)
        w[near] = np.concatenate([wh, -wl], axis=1)
    return y, w


def exact_interval_stats(alpha, func, family, n=24, samples=257):
    """Continuum average and infimum of a callable over each family interval.

    The average uses a Gauss rule on the interval itself, and the
    infimum is the minimum of dense samples refined by a parabola
    through the best sample and its neighbours.
    """
    lo = np.maximum(family.x0 - family.r0, 0.0)
    hi = family.x0 + family.r0
    y, w = _interval_rule(alpha, lo, hi, n)
    avg = np.sum(w * func(y), axis=1) / np.sum(w, axis=1)
    frac = np.linspace(0.0, 1.0, samples)
    pts = lo[:, None] + (hi - lo)[:, None] * frac[None, :]
    vals = func(pts)
    k = np.argmin(vals, axis=1)
    best = vals[np.arange(len(k)), k]
    inner = (k > 0) & (k < samples - 1)
    kk = np.clip(k, 1, samples - 2)
    r = np.arange(len(k))
    f0, f1, f2 = vals[r, kk - 1], vals[r, kk], vals[r, kk + 1]
    denom = f0 - 2 * f1 + f2
    with np.errstate(divide="ignore", invalid="ignore"):
        vertex = f1 - 0.125 * (f2 - f0) ** 2 / denom
    refined = np.where(inner & (denom > 0), np.minimum(best, vertex), best)
    return avg, refined


def continuum_family(a, x_max=8.0, n_centers=1200, per_decade=24.0, r_min=1e-3):
    """Dense sample of B_a inside (0, x_max), independent of any grid.

    Centers are uniform in sqrt(x); radii are geometric from the top
    admissible radius down to ``r_min``.
    """
    c = (np.linspace(0.0, math.sqrt(x_max), n_centers + 2)[1:-1]) ** 2
    top = np.minimum(np.minimum(a * m_of(c), c), x_max - c)
    n_steps = int(math.ceil(per_decade * max(1.0, math.log10(top.max() / r_min))))
    fac = 10.0 ** (-np.arange(n_steps + 1) / per_decade)
    x0 = np.repeat(c, len(fac))
    r0 = (top[:, None] * fac[None, :]).ravel()
    keep = r0 >= r_min
    zeros = np.zeros(np.count_nonzero(keep), dtype=np.intp)
    return IntervalFamily(x0[keep], r0[keep], zeros, zeros, float(a), float(per_decade))


def _exact_stats_one(alpha, func, lo, hi, n=48):
    y, w = _interval_rule(alpha, np.array([lo]), np.array([hi]), n)
    avg = float(np.sum(w * func(y)) / np.sum(w))
    t = np.linspace(lo, hi, 129)
    v = func(t)
    k = int(np.argmin(v))
    best = float(v[k])
    if 0 < k < len(t) - 1:
        res = minimize_scalar(lambda z: float(func(np.array([z]))[0]), bounds=(t[k - 1], t[k + 1]),
                              method="bounded", options={"xatol": 1e-12 * max(1.0, hi)})
        best = min(best, float(res.fun))
    return avg, best


def continuum_blo(alpha, func, family, polish=3, maxiter=300):
    """sup over B_a of the exact average of func minus its exact infimum.

    The family gives starting intervals; the best ``polish`` of them are
    refined by Nelder-Mead over (center, fraction of the top admissible
    radius), so the result approximates the continuum supremum rather
    than its sampled value.
    """
    avg, inf = exact_interval_stats(alpha, func, family)
    vals = avg - inf
    a, x_max = family.a, float(np.max(family.x0 + family.r0))
    k0 = int(np.argmax(vals))
    best_v, best_iv = float(vals[k0]), family.interval(k0)

    def top(c):
        return min(a * min(1.0, 1.0 / c), c, x_max - c)

    def neg(p):
        c, s = p[0], min(p[1], 1.0)
        if not (0.0 < c < x_max) or s <= 0.0:
            return 0.0
        r = s * top(c)
        if r <= 0:
            return 0.0
        av, inf_ = _exact_stats_one(alpha, func, max(c - r, 0.0), c + r)
        return -(av - inf_)

    for k in np.argsort(vals)[::-1][:polish]:
        c0 = float(family.x0[k])
        p0 = np.array([c0, float(family.r0[k]) / top(c0)])
        res = minimize(neg, p0, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": maxiter})
        if -float(res.fun) > best_v:
            best_v = -float(res.fun)
            c, s = res.x[0], min(res.x[1], 1.0)
            best_iv = AdmissibleInterval(float(c), float(s * top(c)), a)
    return SeminormReport(float(best_v), best_iv, len(family), kind="blo-continuum")


def prop22_gap(f, family, reference=None):
    """Both sides of ||M_a f - f||_inf = sup_I (f_I - essinf_I f).

    Parameters
    ----------
    f : GridFunction
    family : IntervalFamily
        Grid family defining M_a f at the nodes.
    reference : float, optional
        Right side computed elsewhere, typically ``continuum_blo`` of
        the callable behind f. Without it the right side is the grid
        version, max over the family of (average - nodal minimum) with
        the same averages as M_a. That coincides with the left side
        identically (both are the max over pairs node in I), so only a
        continuum reference measures a discretization gap.

    Returns
    -------
    (lhs, rhs) : floats
    """
    m = natural_maximal_grid(f, family)
    v = np.real(np.asarray(f.values))
    ok = ~np.isnan(m)
    lhs = float(np.max(m[ok] - v[ok]))
    if reference is None:
        rhs = float(np.max(family_averages(f, family) - family_essinf(f, family)))
    else:
        rhs = float(reference)
    return lhs, rhs


def relative_gap(lhs, rhs):
    return abs(lhs - rhs) / max(rhs, 1e-12)


@dataclass
class Prop21Report:
    ratio: float
    blo_of_maximal: float
    bmo: float


def prop21_check(f, family):
    """blo(M_a f) / bmo(f), with 0/0 read as 0."""
    m = natural_maximal_grid(f, family)
    covered = np.where(np.isnan(m), np.real(np.asarray(f.values)), m)
    blo = blo_seminorm(f.with_values(covered), family).value
    bmo = bmo_seminorm(f, family).value
    # seminorms at roundoff level of sup|f| count as zero
    floor = 1e-12 * max(1.0, float(np.max(np.abs(np.asarray(f.values)))))
    ratio = 0.0 if blo <= floor and bmo <= floor else blo / max(bmo, floor)
    return Prop21Report(ratio, blo, bmo)


def a_sweep(f, a_values=(0.5, 1.0, 2.0), per_decade=12.0):
    """BMO and BLO seminorms for several a; diagnostic only."""
    rows = []
    for a in a_values:
        fam = build_family(f, a, per_decade)
        rows.append((a, bmo_seminorm(f, fam).value, blo_seminorm(f, fam).value))
    return rows


def standard_test_set(alpha=0.0):
    """The five real test functions used for the BLO/BMO property checks.

    Returns
    -------
    dict
        name -> vectorized callable on (0, inf).
    """
    return {
        "smoothed-step": lambda x: np.tanh((np.asarray(x) - 1.0) / 0.05),
        "laguerre-2": lambda x: laguerre_eval(alpha, 2, x),
        "bump": lambda x: np.exp(-(np.asarray(x) - 1.5) ** 2 / 0.1),
        "damped-cosine": lambda x: np.cos(3.0 * np.asarray(x)) * np.exp(-0.5 * np.asarray(x)),
        "decaying-sine": lambda x: np.sin(2.0 * np.asarray(x)) / (1.0 + np.asarray(x)),
    }


@dataclass
class Prop22Level:
    level: int
    nodes: int
    intervals: int
    lhs: float
    rhs: float
    gap: float


def prop22_study(alpha, func, a=1.0, levels=3, base=None, per_decade=12.0, reference=None):
    """Relative gap of the M_a identity over nested grid and family refinements.

    Level l uses ``base.nested(l)`` (every earlier node kept) and a
    family with ``per_decade * 2**l`` radii per decade, so each family
    contains the previous one. The right side is the continuum value
    from ``continuum_blo`` unless ``reference`` is given.

    Returns
    -------
    list of Prop22Level
    """
    base = base or QuadratureSpec(rule="fejer2")
    if reference is None:
        reference = continuum_blo(alpha, func, continuum_family(a, base.x_max)).value
    out = []
    for lev in range(levels):
        g = build_grid(alpha, base.nested(lev)).with_values(func)
        fam = build_family(g, a, per_decade * 2 ** lev)
        lhs, rhs = prop22_gap(g, fam, reference)
        out.append(Prop22Level(lev, len(g.nodes), len(fam), lhs, rhs, relative_gap(lhs, rhs)))
    return out


__all__ = [
    "IntervalFamily", "Prop21Report", "Prop22Level", "SeminormReport", "a_sweep", "blo_norm",
    "blo_seminorm", "bmo_norm", "bmo_seminorm", "build_family", "continuum_blo",
    "continuum_family", "exact_interval_stats", "family_averages", "family_essinf",
    "family_weights", "natural_maximal", "natural_maximal_grid", "prop21_check", "prop22_gap",
    "prop22_study", "relative_gap", "standard_test_set",
]
