"""Composite quadrature grids for the Laguerre measure and grid functions."""

import csv
import io
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import roots_jacobi

from .measure import AdmissibleInterval, gamma_alpha_density, gamma_alpha_mass
from .specfun import _check_alpha, log_gamma

MIN_NODES = 8


class ResolutionError(ValueError):
    """Too few grid nodes to resolve the requested quantity."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Layout of the composite rule.

    Parameters
    ----------
    n_uniform : int
        Equal panels on [1, x_max].
    n_geometric : int
        Panels on [x_min, 1] with breakpoints in geometric progression.
    geo_ratio : float
        Ratio of successive geometric breakpoints, in (0, 1).
    points : int
        Nodes per panel.
    x_max : float
        Domain cutoff.
    rule : {"gauss", "fejer2"}
        ``gauss``: Gauss-Legendre panels (Gauss-Jacobi on the panel at 0).
        ``fejer2``: interior Chebyshev extrema cos(k pi / n), k = 1..n-1,
        with interpolatory weights against the density. Doubling n keeps
        every old node, so ``nested`` refinements are supersets.
    """

    n_uniform: int = 28
    n_geometric: int = 20
    geo_ratio: float = 0.5
    points: int = 8
    x_max: float = 8.0
    rule: str = "gauss"

    def __post_init__(self):
        if self.rule not in ("gauss", "fejer2"):
            raise ValueError(f"unknown rule {self.rule!r}")
        if self.n_uniform < 1 or self.n_geometric < 1 or self.points < 2:
            raise ValueError("panel counts must be >= 1 and points >= 2")
        if not 0 < self.geo_ratio < 1:
            raise ValueError("geo_ratio must lie in (0, 1)")
        if not self.x_max > 1:
            raise ValueError("x_max must exceed 1")

    def refined(self, level=1):
        """Spec with every panel split in 2**level (same breakpoint envelope)."""
        f = 2 ** level
        return replace(self, n_uniform=self.n_uniform * f, n_geometric=self.n_geometric * f,
                       geo_ratio=self.geo_ratio ** (1.0 / f))

    def nested(self, level=1):
        """Fejer spec on the same panels whose nodes contain this spec's nodes.

        n = points + 1 doubles per level, so points goes p -> 2p + 1.
        """
        if self.rule != "fejer2":
            raise ValueError("nested refinement needs rule='fejer2'")
        return replace(self, points=(self.points + 1) * 2 ** level - 1)

    @classmethod
    def for_degree(cls, degree, alpha=0.0, **kw):
        """Spec whose cutoff also captures polynomial integrands.

        ``degree`` is the degree in u = x**2 of the integrand (2k for
        products of two polynomials of degree k). The gamma tail alone
        is not a safe cutoff for such integrands: u**n exp(-u) still has
        mass beyond u = 64 when n is about 30.
        """
        s = degree + alpha + 1.0
        x_max = max(8.0, math.ceil(math.sqrt(s + 10.0 * math.sqrt(s) + 40.0)))
        kw.setdefault("n_uniform", int(round(4 * (x_max - 1))))
        return cls(x_max=float(x_max), **kw)

    def breakpoints(self):
        geo = self.geo_ratio ** np.arange(self.n_geometric, -1, -1)
        uni = np.linspace(1.0, self.x_max, self.n_uniform + 1)[1:]
        return np.concatenate([[0.0], geo, uni])


def _freeze(arr):
    arr = np.array(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class GridFunction:
    """Values on quadrature nodes with weights for integration against gamma_alpha."""

    nodes: np.ndarray
    values: np.ndarray
    weights: np.ndarray
    alpha: float
    panels: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        values = np.asarray(self.values)
        if values.dtype.kind not in "fc":
            values = values.astype(float)
        if nodes.ndim != 1 or nodes.shape != weights.shape or nodes.shape != values.shape:
            raise ValueError("nodes, weights and values must be 1-d of equal length")
        if np.any(np.diff(nodes) <= 0) or nodes[0] <= 0:
            raise ValueError("nodes must be positive and strictly increasing")
        if np.any(weights < 0):
            raise ValueError("weights must be nonnegative")
        object.__setattr__(self, "nodes", _freeze(nodes))
        object.__setattr__(self, "weights", _freeze(weights))
        object.__setattr__(self, "values", _freeze(values))
        if self.panels is not None:
            object.__setattr__(self, "panels", _freeze(np.asarray(self.panels, dtype=float)))

    def __len__(self):
        return len(self.nodes)

    def with_values(self, values):
        """Same grid, new values (array or callable of the nodes)."""
        if callable(values):
            values = values(np.asarray(self.nodes))
        return replace(self, values=np.broadcast_to(values, self.nodes.shape).copy())

    @property
    def x_max(self):
        return float(self.panels[-1]) if self.panels is not None else float(self.nodes[-1])

    def to_csv(self):
        """CSV text with columns node, value, weight."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["node", "value", "weight"])
        for x, v, wt in zip(self.nodes, self.values, self.weights):
            w.writerow([repr(float(x)), _fmt(v), repr(float(wt))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text, alpha):
        rows = list(csv.reader(io.StringIO(text)))[1:]
        nodes = [float(r[0]) for r in rows]
        values = [complex(r[1]) if "j" in r[1] else float(r[1]) for r in rows]
        weights = [float(r[2]) for r in rows]
        return cls(np.array(nodes), np.array(values), np.array(weights), alpha)


def _fmt(v):
    if isinstance(v, (complex, np.complexfloating)):
        return repr(complex(v))
    return repr(float(v))


def build_grid(alpha, spec=None):
    """Composite Gauss grid for the Laguerre measure.

    The panel touching 0 uses Gauss-Jacobi nodes for the weight
    x^(2 alpha + 1), so the endpoint behaviour is integrated exactly.
    Other panels are Gauss-Legendre with the full density folded into
    the weights.

    Parameters
    ----------
    alpha : float
        Order, alpha > -1/2.
    spec : QuadratureSpec, optional

    Returns
    -------
    GridFunction
        Skeleton with zero values.
    """
    alpha = _check_alpha(alpha)
    spec = spec or QuadratureSpec()
    bps = spec.breakpoints()
    if spec.rule == "fejer2":
        nodes, weights = _fejer_grid(alpha, bps, spec.points)
        return GridFunction(nodes, np.zeros_like(nodes), weights, alpha, panels=bps)
    n = spec.points
    beta = 2.0 * alpha + 1.0
    sj, wj = roots_jacobi(n, 0.0, beta)
    h0 = bps[1]
    x0 = 0.5 * h0 * (1.0 + sj)
    c = 2.0 * math.exp(-float(log_gamma(alpha + 1.0)))
    w0 = (0.5 * h0) ** (beta + 1.0) * wj * c * np.exp(-x0 * x0)
    gl_x, gl_w = np.polynomial.legendre.leggauss(n)
    lo, hi = bps[1:-1], bps[2:]
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    xs = (mid[:, None] + half[:, None] * gl_x[None, :]).ravel()
    ws = (half[:, None] * gl_w[None, :]).ravel() * gamma_alpha_density(alpha, xs)
    nodes = np.concatenate([x0, xs])
    weights = np.concatenate([w0, ws])
    return GridFunction(nodes, np.zeros_like(nodes), weights, alpha, panels=bps)


def _fejer_grid(alpha, bps, points):
    """Fejer second-rule nodes per panel with weights int L_k dgamma_alpha.

    The weights come from product integration of the Lagrange basis
    against a fine Gauss rule (Gauss-Jacobi on the panel at 0), so they
    are exact for polynomials of degree < points times the density.
    """
    n = points + 1
    t = np.cos(np.pi * np.arange(n - 1, 0, -1) / n)
    bw = np.array([np.prod(1.0 / (t[k] - np.delete(t, k))) for k in range(len(t))])
    nodes, weights = [], []
    for lo, hi in zip(bps[:-1], bps[1:]):
        y, w = gamma_panel_rule(alpha, lo, hi, 2 * points + 16)
        s = (2.0 * y - (lo + hi)) / (hi - lo)
        diff = s[:, None] - t[None, :]
        q = bw / diff
        lag = q / q.sum(axis=1, keepdims=True)
        nodes.append(0.5 * (lo + hi) + 0.5 * (hi - lo) * t)
        weights.append(w @ lag)
    weights = np.concatenate(weights)
    # for large alpha the first panels carry ~1e-40 mass; rounding there
    # can leave tiny negative weights
    if np.any(weights < -1e-14 * weights.sum()):
        raise ResolutionError("Fejer weights are not positive for this layout")
    return np.concatenate(nodes), np.maximum(weights, 0.0)


def gamma_panel_rule(alpha, lo, hi, n=8):
    """Nodes and weights for int_lo^hi g(y) dgamma_alpha(y).

    A panel starting at 0 gets Gauss-Jacobi nodes for y^(2 alpha + 1).
    """
    if hi <= lo:
        return np.empty(0), np.empty(0)
    if lo == 0.0:
        beta = 2.0 * alpha + 1.0
        sj, wj = roots_jacobi(n, 0.0, beta)
        y = 0.5 * hi * (1.0 + sj)
        c = 2.0 * math.exp(-float(log_gamma(alpha + 1.0)))
        return y, (0.5 * hi) ** (beta + 1.0) * wj * c * np.exp(-y * y)
    gx, gw = np.polynomial.legendre.leggauss(n)
    y = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gx
    return y, 0.5 * (hi - lo) * gw * gamma_alpha_density(alpha, y)


def punctured_rule(alpha, x, eps, x_max, n=8, ratio=2.0, max_width=0.5):
    """Quadrature for int over {0 < y < x_max, |y - x| > eps} against gamma_alpha.

    Panels are geometric in the offset |y - x|, starting at eps, so that
    integrands with a 1/|y - x| profile are resolved at every scale;
    panel widths are capped at ``max_width`` to follow the Gaussian density.

    Returns
    -------
    y, w : ndarray
    """
    ys, ws = [], []
    for side in (-1.0, 1.0):
        reach = x if side < 0 else x_max - x
        h = eps
        while h < reach:
            h2 = min(h * ratio, h + max_width, reach)
            if side < 0 and reach - h2 < 0.5 * (h2 - h):
                # absorb a thin sliver next to 0 into the Gauss-Jacobi panel
                h2 = reach
            if side < 0:
                lo = x - h2
                lo = 0.0 if h2 >= reach else lo
                y, w = gamma_panel_rule(alpha, lo, x - h, n)
            else:
                y, w = gamma_panel_rule(alpha, x + h, x + h2, n)
            ys.append(y)
            ws.append(w)
            h = h2
    if not ys:
        return np.empty(0), np.empty(0)
    return np.concatenate(ys), np.concatenate(ws)


def integrate(f):
    """Quadrature sum of f against gamma_alpha."""
    return np.sum(f.weights * f.values)


def l1_norm(f):
    """L^1(gamma_alpha) norm on the grid."""
    return float(np.sum(f.weights * np.abs(f.values)))


def l2_norm(f):
    return float(math.sqrt(np.sum(f.weights * np.abs(f.values) ** 2)))


def node_range(nodes, lo, hi):
    """Index slice of nodes inside the open interval (lo, hi)."""
    i0 = int(np.searchsorted(nodes, lo, side="right"))
    i1 = int(np.searchsorted(nodes, hi, side="left"))
    return i0, i1


def _slice(f, interval):
    i0, i1 = node_range(f.nodes, interval.lo, interval.hi)
    if i1 - i0 < MIN_NODES:
        raise ResolutionError(f"only {i1 - i0} nodes in ({interval.lo}, {interval.hi})")
    return i0, i1


def interval_average(f, interval):
    """gamma_alpha-average of f over the nodes of an admissible interval."""
    i0, i1 = _slice(f, interval)
    w = f.weights[i0:i1]
    return np.sum(w * f.values[i0:i1]) / np.sum(w)


def interval_essinf(f, interval):
    """Nodal minimum on the interval (grid proxy for the essential infimum)."""
    i0, i1 = _slice(f, interval)
    return float(np.min(np.real(f.values[i0:i1])))


def interval_mass_exact(alpha, interval):
    """gamma_alpha(I) in closed form, for comparing with grid sums."""
    return gamma_alpha_mass(alpha, interval.lo, interval.hi)


__all__ = [
    "AdmissibleInterval", "GridFunction", "QuadratureSpec", "ResolutionError",
    "build_grid", "gamma_panel_rule", "integrate", "interval_average", "interval_essinf",
    "interval_mass_exact", "l1_norm", "l2_norm", "node_range", "punctured_rule",
]
