"""Time integrals of heat-kernel derivatives over (0, inf).

Both the Riesz kernel and the multiplier kernels are integrals of the
form int_0^inf g(t) dt where g is built from W_t(x, y). Near t = 0 the
integrand behaves like exp(-(x-y)^2 / (2t)) times a power of t, and for
large t it decays exponentially. After the substitution t = exp(v) the
integrand is analytic in a strip and decays double-exponentially at
v -> -inf and exponentially in t at the right, so the trapezoid rule in
v converges geometrically in 1/h.
"""

import math
from dataclasses import dataclass

import numpy as np

from .heat import heat_parts

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class TJob:
    """Parameters of the log-time trapezoid rule.

    Parameters
    ----------
    h : float
        Step in v = log t.
    left_margin : float
        Extra room, in v, below the point t = d^2 / 90 where the
        Gaussian factor exp(-d^2 / 2t) has dropped below e^-45.
    t_max_scale : float
        Upper limit t_max = t_max_scale / (alpha + 1).
    chunk : int
        Maximum number of kernel evaluations per vectorized block.
    """

    h: float = 0.2
    left_margin: float = 1.5
    t_max_scale: float = 40.0
    chunk: int = 400_000

    def tighter(self, factor=2.0):
        return TJob(self.h / factor, self.left_margin + 1.0, self.t_max_scale * 1.25, self.chunk)


DEFAULT_TJOB = TJob()


def _v_limits(alpha, d, job):
    v_hi = math.log(job.t_max_scale / (alpha + 1.0))
    v_lo = np.log(np.maximum(d, 1e-300) ** 2 / 90.0) - job.left_margin
    return np.minimum(v_lo, v_hi - 2.0), v_hi


def time_integral(alpha, x, y, kind, phi=None, dphi=None, job=DEFAULT_TJOB, shift=None):
    """Integrate a heat-kernel functional over t for many (x, y) pairs.

    Parameters
    ----------
    alpha : float
    x, y : array_like
        1-d arrays of equal length, x != y.
    kind : {"riesz", "mult", "mult_dual"}
        ``riesz``: (1/sqrt(pi)) int dW/dx t^(-1/2) dt.
        ``mult``: -int phi(t) dW/dt dt.
        ``mult_dual``: int phi'(t) W dt.
    phi, dphi : callable, optional
        Symbol and its derivative, vectorized in t.
    shift : array_like, optional
        Per-pair log shift subtracted before exponentiation, so kernels
        can be returned already multiplied by exp(-shift).

    Returns
    -------
    ndarray
        Real or complex values, one per pair.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    shift = np.zeros_like(x) if shift is None else np.broadcast_to(np.asarray(shift, dtype=float), x.shape)
    d = np.abs(x - y)
    if np.any(d < 1e-12):
        raise ValueError("kernel is singular on the diagonal (|x-y| < 1e-12)")
    v_lo, v_hi = _v_limits(alpha, d, job)
    n_pts = int(math.ceil((v_hi - np.min(v_lo)) / job.h)) + 1
    probe = phi(np.array([1.0])) if kind == "mult" else (dphi(np.array([1.0])) if kind == "mult_dual" else 0.0)
    dtype = complex if np.iscomplexobj(probe) else float
    out = np.empty(x.shape, dtype=dtype)
    per = max(1, job.chunk // n_pts)
    frac = np.linspace(0.0, 1.0, n_pts)
    for i0 in range(0, len(x), per):
        sl = slice(i0, i0 + per)
        lo = v_lo[sl][:, None]
        step = (v_hi - lo) / (n_pts - 1)
        v = lo + (v_hi - lo) * frac[None, :]
        t = np.exp(v)
        xs, ys = x[sl][:, None], y[sl][:, None]
        logw, gx, gt = heat_parts(alpha, t, xs, ys)
        w = np.exp(logw - shift[sl][:, None])
        if kind == "riesz":
            g = w * gx * np.sqrt(t) / _SQRT_PI
        elif kind == "mult":
            g = -phi(t) * w * gt * t
        elif kind == "mult_dual":
            g = dphi(t) * w * t
        else:
            raise ValueError(f"unknown kind {kind!r}")
        g[:, 0] *= 0.5
        g[:, -1] *= 0.5
        out[sl] = np.sum(g, axis=1) * step[:, 0]
    return out
