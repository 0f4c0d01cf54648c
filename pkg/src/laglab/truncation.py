"""Truncated singular integrals on a grid, for a whole ladder of radii at once.

For a node x_i and radius eps the truncated operator is evaluated as

    T_eps f(x_i) = sum_j c_j(eps) w_j K(x_i, x_j) (f_j - f_i)
                   + f_i * T_eps 1(x_i).

The first sum has a bounded integrand near the diagonal wherever f is
locally smooth, so the node sum is accurate. Node j stands for the cell
between the midpoints to its neighbours, and c_j(eps) is the fraction of
that cell outside (x_i - eps, x_i + eps), so the sum is continuous in eps.
The diagonal cell contributes its limit value kappa_i f'(x_i), where
kappa_i = lim (y - x_i) K(x_i, y) over the odd part of the kernel and
f' comes from the polynomial interpolant on the node's panel. T_eps 1(x_i) is computed
separately and accurately: a punctured Gauss rule for the part outside
the largest radius, plus a Chebyshev antiderivative in log|y - x| for the
annulus between the largest and the current radius. For f = 1 the node
sum vanishes and the operator reproduces T_eps 1 to quadrature accuracy,
which a plain node sum cannot do near the diagonal.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as cheb

from .gridquad import punctured_rule
from .measure import gamma_alpha_density, m_of
from .tquad import DEFAULT_TJOB, time_integral


class RieszKernel:
    """Riesz kernel (1/sqrt(pi)) int_0^inf dW_t/dx (x, y) t^(-1/2) dt."""

    def __init__(self, alpha, job=DEFAULT_TJOB):
        self.alpha = float(alpha)
        self.job = job
        self.name = "riesz"

    def __call__(self, x, y):
        return time_integral(self.alpha, x, y, "riesz", job=self.job)


@dataclass(frozen=True)
class TruncationLadder:
    """Strictly decreasing truncation radii plus the lacunary base theta."""

    radii: tuple
    theta: float = 2.0

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if r.ndim != 1 or len(r) == 0:
            raise ValueError("ladder needs at least one radius")
        if np.any(r <= 0) or np.any(np.diff(r) >= 0):
            raise ValueError("ladder radii must be positive and strictly decreasing")
        if not self.theta > 1:
            raise ValueError("theta must exceed 1")
        object.__setattr__(self, "radii", tuple(float(v) for v in r))

    @classmethod
    def geometric(cls, top, per_decade=40, decades=4.0, theta=2.0):
        """Radii top * 10^(-k / per_decade) for k = 0 .. per_decade * decades."""
        return cls(tuple(top * ladder_factors(per_decade, decades)), theta)

    def below(self, bound):
        """Radii not exceeding bound (with a relative rounding slack)."""
        r = np.asarray(self.radii)
        return r[r <= bound * (1 + 1e-12)]

    def block_index(self, radii=None):
        """j with theta^j <= eps < theta^(j+1), for each radius."""
        r = np.asarray(self.radii if radii is None else radii)
        j = np.floor(np.log(r) / math.log(self.theta) + 1e-12)
        return j.astype(int)


def ladder_factors(per_decade, decades):
    n = int(round(per_decade * decades))
    return 10.0 ** (-np.arange(n + 1) / per_decade)


def _panel_derivative_blocks(grid):
    """Per-panel differentiation matrices of the nodal interpolant, or None."""
    if grid.panels is None:
        return None
    n_pan = len(grid.panels) - 1
    n = len(grid.nodes)
    if n % n_pan:
        return None
    p = n // n_pan
    x = np.asarray(grid.nodes).reshape(n_pan, p)
    diff = x[:, :, None] - x[:, None, :]
    eye = np.eye(p, dtype=bool)[None]
    diff_off = np.where(eye, 1.0, diff)
    wb = 1.0 / np.prod(diff_off, axis=2)
    dm = (wb[:, None, :] / wb[:, :, None]) / diff_off
    dm = np.where(eye, 0.0, dm)
    dm = dm - np.where(eye, np.sum(dm, axis=2, keepdims=True), 0.0)
    return dm


def _apply_blocks(dmat, f2):
    if dmat is None:
        return np.zeros_like(f2)
    n_pan, p, _ = dmat.shape
    blocks = f2.reshape(n_pan, p, -1)
    return np.einsum("kij,kjm->kim", dmat, blocks).reshape(f2.shape)


def _cheb_points(n):
    return np.cos(np.pi * (np.arange(n) + 0.5) / n)


class TruncatedOperator:
    """A truncated kernel operator on a grid, precomputed for a radius ladder.

    Parameters
    ----------
    kernel : callable
        Vectorized two-point kernel ``kernel(x, y)`` against gamma_alpha(y),
        with attribute ``alpha``.
    grid : GridFunction
        Integration grid; the domain is (0, grid.x_max).
    a : float
        Admissibility scale; radii at x_i run over a m(x_i) * factors.
    per_decade, decades : float
        Ladder density and span below the top radius a m(x_i).
    rows : array_like of int, optional
        Output node indices (default: all nodes).
    cheb_n : int
        Chebyshev points per annulus segment.
    radii : array_like, optional
        Explicit strictly decreasing radii, shape (rows, L) or (L,);
        overrides the geometric ladder.
    """

    def __init__(self, kernel, grid, a=1.0, per_decade=40, decades=4.0, rows=None, cheb_n=40,
                 theta=2.0, radii=None):
        self.kernel = kernel
        self.alpha = kernel.alpha
        self.grid = grid
        self.a = float(a)
        self.theta = float(theta)
        self.nodes = np.asarray(grid.nodes)
        self.weights = np.asarray(grid.weights)
        self.x_max = grid.x_max
        self.rows = np.arange(len(self.nodes)) if rows is None else np.asarray(rows, dtype=int)
        if radii is None:
            factors = ladder_factors(per_decade, decades)
            tops = self.a * m_of(self.nodes[self.rows])
            self.radii = tops[:, None] * factors[None, :]
        else:
            r = np.asarray(radii, dtype=float)
            self.radii = np.broadcast_to(r if r.ndim == 2 else r[None, :],
                                         (len(self.rows), r.shape[-1])).copy()
            if np.any(self.radii <= 0) or np.any(np.diff(self.radii, axis=1) >= 0):
                raise ValueError("radii must be positive and strictly decreasing")
        self.tops = self.radii[:, 0]
        self.cheb_n = int(cheb_n)
        probe = kernel(np.array([1.0]), np.array([1.5]))
        self._dtype = complex if np.iscomplexobj(probe) else float
        self._build_rows()
        self.ones = self._far_part()[:, None] + self._annulus_part()

    # -- node sums ---------------------------------------------------------
    def _build_rows(self):
        n = len(self.nodes)
        nr = len(self.rows)
        xi = np.repeat(self.nodes[self.rows], n)
        yj = np.tile(self.nodes, nr)
        d = np.abs(xi - yj)
        keep = d >= 1e-12
        vals = np.zeros(len(xi), dtype=self._dtype)
        vals[keep] = self.kernel(xi[keep], yj[keep])
        kw = vals.reshape(nr, n) * self.weights[None, :]
        b = np.concatenate([[0.0], 0.5 * (self.nodes[1:] + self.nodes[:-1]), [self.x_max]])
        self._cell_bounds = b
        x = self.nodes[self.rows][:, None]
        j = np.arange(n)[None, :]
        right = j > self.rows[:, None]
        d_near = np.where(right, b[None, 1:] - x, x - b[None, 1:])
        d_near = np.where(right, b[None, :-1] - x, d_near)
        d_near[np.arange(nr), self.rows] = 0.0
        self._order = np.argsort(d_near, axis=1, kind="stable")
        self._kw = kw
        self._kw_sorted = np.take_along_axis(kw, self._order, axis=1)
        dsort = np.take_along_axis(d_near, self._order, axis=1)
        # cells whose near edge is at or beyond eps are fully counted
        self._count = np.stack([np.searchsorted(dsort[k], self.radii[k], side="left")
                                for k in range(nr)])
        self._partial_cells(b)
        self._diag_factor()

    def _partial_cells(self, b):
        """Cells straddling x_i - eps and x_i + eps, with their outside fractions."""
        nr, L = self.radii.shape
        xi = self.nodes[self.rows][:, None]
        lo, hi = xi - self.radii, xi + self.radii
        jl = np.searchsorted(b, lo, side="right") - 1
        jr = np.searchsorted(b, hi, side="left") - 1
        rows = self.rows[:, None]
        ok_l = (lo > 0) & (jl >= 0) & (jl < rows)
        ok_r = (jr > rows) & (jr < len(self.nodes))
        jl_c = np.clip(jl, 0, len(self.nodes) - 1)
        jr_c = np.clip(jr, 0, len(self.nodes) - 1)
        fl = (lo - b[jl_c]) / (b[jl_c + 1] - b[jl_c])
        fr = (b[jr_c + 1] - hi) / (b[jr_c + 1] - b[jr_c])
        self._pl = (jl_c, np.where(ok_l, np.clip(fl, 0.0, 1.0), 0.0))
        self._pr = (jr_c, np.where(ok_r, np.clip(fr, 0.0, 1.0), 0.0))
        left = xi - b[self.rows][:, None]
        rgt = b[self.rows + 1][:, None] - xi
        self._diag_frac = (np.maximum(left - self.radii, 0.0)
                           + np.maximum(rgt - self.radii, 0.0)) / (left + rgt)

    def _diag_factor(self):
        """w_i * kappa_i, with kappa_i from the odd part of (y - x_i) K(x_i, y)."""
        x = self.nodes[self.rows]
        h = 1e-7 * np.maximum(1.0, x)
        h = np.minimum(h, 0.5 * x)
        kp = self.kernel(x, x + h)
        km = self.kernel(x, x - h)
        self._diag_w = 0.5 * (kp - km) * h * self.weights[self.rows]
        self._dmat = _panel_derivative_blocks(self.grid)

    # -- T_eps 1 -----------------------------------------------------------
    def _far_part(self):
        """T_top 1(x_i) by a punctured Gauss rule outside the top radius."""
        xs, ys, ws, owner = [], [], [], []
        for k, (i, top) in enumerate(zip(self.rows, self.tops)):
            y, w = punctured_rule(self.alpha, self.nodes[i], top, self.x_max)
            ys.append(y)
            ws.append(w)
            xs.append(np.full_like(y, self.nodes[i]))
            owner.append(np.full(len(y), k))
        x, y, w, owner = (np.concatenate(v) for v in (xs, ys, ws, owner))
        out = np.zeros(len(self.rows), dtype=self._dtype)
        if len(x):
            np.add.at(out, owner, self.kernel(x, y) * w)
        return out

    def _segments(self, x, u_lo, u_hi):
        cuts = [u_lo, u_hi]
        for b in (x, self.x_max - x):
            if b > 0 and u_lo < math.log(b) < u_hi:
                cuts.append(math.log(b))
        cuts = sorted(cuts)
        return list(zip(cuts[:-1], cuts[1:]))

    def _annulus_part(self):
        """int over eps < |y - x| < top of K(x, y) dgamma(y), for each ladder eps."""
        t_nodes = _cheb_points(self.cheb_n)
        seg_info = []
        px, py, pw, pid = [], [], [], []
        for k, i in enumerate(self.rows):
            x = self.nodes[i]
            u_hi = math.log(self.tops[k])
            u_lo = math.log(self.radii[k, -1])
            if u_hi - u_lo < 1e-14:
                continue
            for (u0, u1) in self._segments(x, u_lo, u_hi):
                mid, half = 0.5 * (u0 + u1), 0.5 * (u1 - u0)
                h = np.exp(mid + half * t_nodes)
                hm = math.exp(mid)
                seg = len(seg_info)
                seg_info.append((k, u0, u1))
                for side in (1.0, -1.0):
                    inside = (x + hm < self.x_max) if side > 0 else (hm < x)
                    if not inside:
                        continue
                    y = x + side * h
                    px.append(np.full_like(y, x))
                    py.append(y)
                    pw.append(h * gamma_alpha_density(self.alpha, y))
                    pid.append(np.stack([np.full(len(y), seg), np.arange(len(y))], axis=1))
        out = np.zeros(self.radii.shape, dtype=self._dtype)
        if not seg_info:
            return out
        samples = np.zeros((len(seg_info), self.cheb_n), dtype=out.dtype)
        if px:
            x, y, w = (np.concatenate(v) for v in (px, py, pw))
            ids = np.concatenate(pid)
            vals = self.kernel(x, y) * w
            np.add.at(samples, (ids[:, 0], ids[:, 1]), vals)
        for seg, (k, u0, u1) in enumerate(seg_info):
            half = 0.5 * (u1 - u0)
            coef = cheb.chebfit(t_nodes, samples[seg], self.cheb_n - 1)
            anti = cheb.chebint(coef)
            top_val = cheb.chebval(1.0, anti)
            u = np.log(self.radii[k])
            tt = np.clip((u - 0.5 * (u0 + u1)) / half, -1.0, 1.0)
            out[k] += half * (top_val - cheb.chebval(tt, anti))
        return out

    # -- application -------------------------------------------------------
    def ladder_values(self, values):
        """T_eps f(x_i) for every output row and ladder radius.

        Parameters
        ----------
        values : ndarray, shape (n,) or (n, m)
            Function values on the grid nodes (m functions at once).

        Returns
        -------
        ndarray, shape (rows, L) or (rows, L, m)
        """
        f = np.asarray(values)
        single = f.ndim == 1
        f2 = f[:, None] if single else f
        dtype = np.result_type(f2.dtype, self._kw_sorted.dtype, self.ones.dtype)
        out = np.empty((len(self.rows), self.radii.shape[1], f2.shape[1]), dtype=dtype)
        fprime = _apply_blocks(self._dmat, f2)
        for k, i in enumerate(self.rows):
            diff = f2 - f2[i][None, :]
            contrib = self._kw_sorted[k][:, None] * diff[self._order[k]]
            suffix = np.concatenate([np.cumsum(contrib[::-1], axis=0)[::-1],
                                     np.zeros((1, f2.shape[1]), dtype=contrib.dtype)])
            raw = self._kw[k][:, None] * diff
            part = (raw[self._pl[0][k]] * self._pl[1][k][:, None]
                    + raw[self._pr[0][k]] * self._pr[1][k][:, None])
            diag = self._diag_w[k] * self._diag_frac[k][:, None] * fprime[i][None, :]
            out[k] = suffix[self._count[k]] + part + diag + self.ones[k][:, None] * f2[i][None, :]
        return out[..., 0] if single else out

    def ladder(self, k):
        """TruncationLadder of output row k."""
        return TruncationLadder(tuple(self.radii[k]), self.theta)
