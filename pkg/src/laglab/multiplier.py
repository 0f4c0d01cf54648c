"""Laplace-transform-type multipliers and their truncated kernel operators.

A bounded symbol phi on (0, inf) defines M(x) = x int_0^inf phi(t) e^{-xt} dt
and the kernel K(x, y) = -int_0^inf phi(t) dW_t/dt (x, y) dt against
gamma_alpha. When phi' exists, integration by parts gives the second form
K(x, y) = int_0^inf phi'(t) W_t(x, y) dt, used as an independent check.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from .gridquad import punctured_rule
from .riesz import _node_index, ladder_radii_below, maximal_from_ladder, truncated_at
from .specfun import gamma_fn, laguerre_all, eigenvalue
from .tquad import DEFAULT_TJOB, time_integral
from .truncation import TruncatedOperator


class SymbolHypothesisError(ValueError):
    """The symbol violates |phi'(t)| <= C / t on the sampled log grid."""


class DualFormError(RuntimeError):
    """The phi-form and phi'-form of a kernel disagree beyond tolerance."""


@dataclass(frozen=True)
class LaplaceSymbol:
    """A bounded symbol phi with optional derivative.

    Parameters
    ----------
    phi : callable
        Vectorized in t > 0; real or complex valued.
    dphi : callable, optional
        Derivative of phi.
    name : str
    bound_c : float, optional
        Known constant C in |phi'(t)| <= C / t.
    """

    phi: Callable
    dphi: Optional[Callable] = None
    name: str = "symbol"
    bound_c: Optional[float] = None

    @property
    def is_complex(self):
        return bool(np.iscomplexobj(self.phi(np.array([1.0]))))


def constant_symbol(c=1.0):
    return LaplaceSymbol(lambda t: np.full(np.shape(t), c, dtype=float),
                         lambda t: np.zeros(np.shape(t)), "constant", 0.0)


def exp_symbol():
    """phi(t) = e^{-t}, with M(x) = x / (x + 1)."""
    return LaplaceSymbol(lambda t: np.exp(-t), lambda t: -np.exp(-t), "exp", math.exp(-1.0))


def rational_symbol():
    """phi(t) = 1 / (1 + t)."""
    return LaplaceSymbol(lambda t: 1.0 / (1.0 + t), lambda t: -1.0 / (1.0 + t) ** 2,
                         "rational", 0.25)


def imaginary_power_symbol(eta):
    """phi(t) = t^{-i eta} / Gamma(1 - i eta), so that M(x) = x^{i eta}.

    Dividing by Gamma(1 + i eta) instead would give
    M(x) = x^{i eta} Gamma(1 - i eta) / Gamma(1 + i eta).
    """
    eta = float(eta)
    g = complex(gamma_fn(complex(1.0, -eta)))

    def phi(t):
        return np.exp(-1j * eta * np.log(t)) / g

    def dphi(t):
        return -1j * eta * np.exp(-1j * eta * np.log(t)) / (g * t)

    return LaplaceSymbol(phi, dphi, f"imaginary-power:{eta:g}", abs(eta) / abs(g))


def sin_exp_symbol():
    """phi(t) = sin(e^t): bounded, but |phi'(t)| t is unbounded."""
    def dphi(t):
        with np.errstate(over="ignore", invalid="ignore"):
            return np.cos(np.exp(t)) * np.exp(t)

    def phi(t):
        with np.errstate(over="ignore", invalid="ignore"):
            return np.sin(np.exp(t))

    return LaplaceSymbol(phi, dphi, "sin-exp")


def symbol_from_name(name):
    """Parse "constant", "exp", "rational", "sin-exp" or "imaginary-power:eta"."""
    name = name.strip()
    if name.startswith("imaginary-power"):
        _, _, val = name.partition(":")
        return imaginary_power_symbol(float(val) if val else 1.0)
    table = {"constant": constant_symbol, "exp": exp_symbol, "rational": rational_symbol,
             "sin-exp": sin_exp_symbol}
    if name not in table:
        raise ValueError(f"unknown symbol {name!r}")
    return table[name]()


def symbol_M(sym, x, h=0.05):
    """M(x) = x int_0^inf phi(t) e^{-xt} dt.

    The integral is taken with the trapezoid rule in v = log(x t) over
    [-40, log 60], where the integrand e^{v} phi(e^v / x) exp(-e^v)
    decays at both ends faster than the rule's error.

    Examples
    --------
    >>> round(float(symbol_M(exp_symbol(), 1.0)), 12)
    0.5
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs <= 0):
        raise ValueError("x must be positive")
    v = np.arange(-40.0, math.log(60.0) + h, h)
    s = np.exp(v)
    wts = np.full(len(v), h)
    wts[0] = wts[-1] = 0.5 * h
    vals = sym.phi(s[None, :] / xs[:, None]) * (s * np.exp(-s) * wts)[None, :]
    out = np.sum(vals, axis=1)
    return out[0] if np.ndim(x) == 0 else out


def symbol_hypothesis(sym, decades=(2, 4, 8), per_decade=25, saturation=1.05):
    """Check sup |phi'(t)| t on nested log grids [10^-k, 10^k].

    Returns
    -------
    float
        The estimated constant C.

    Raises
    ------
    SymbolHypothesisError
        If the supremum is not finite or keeps growing with the window.
    """
    if sym.dphi is None:
        raise SymbolHypothesisError(f"symbol {sym.name} has no derivative")
    sups = []
    for k in decades:
        t = np.logspace(-k, k, int(2 * k * per_decade) + 1)
        with np.errstate(all="ignore"):
            val = np.abs(sym.dphi(t)) * t
        if not np.all(np.isfinite(val)):
            raise SymbolHypothesisError(f"|phi'(t)| t is not finite on [1e-{k}, 1e{k}]")
        sups.append(float(np.max(val)))
    if sups[-1] > saturation * sups[-2] + 1e-300:
        raise SymbolHypothesisError(f"|phi'(t)| t keeps growing: {sups}")
    return sups[-1]


class MultiplierKernel:
    """K(x, y) = -int phi(t) dW_t/dt dt, vectorized; attribute ``alpha``."""

    def __init__(self, alpha, symbol, job=DEFAULT_TJOB, form="phi"):
        if form not in ("phi", "dphi"):
            raise ValueError("form must be 'phi' or 'dphi'")
        if form == "dphi" and symbol.dphi is None:
            raise ValueError("dphi form needs a derivative")
        self.alpha = float(alpha)
        self.symbol = symbol
        self.job = job
        self.form = form
        self.name = f"multiplier[{symbol.name}]"

    def __call__(self, x, y):
        if self.form == "phi":
            return time_integral(self.alpha, x, y, "mult", phi=self.symbol.phi, job=self.job)
        return time_integral(self.alpha, x, y, "mult_dual", dphi=self.symbol.dphi, job=self.job)


def multiplier_kernel(alpha, symbol, x, y, job=DEFAULT_TJOB, cross_check=True, rtol=1e-4,
                      atol=1e-12):
    """Kernel K_phi(x, y); with a derivative, both forms are compared.

    Parameters
    ----------
    alpha : float
    symbol : LaplaceSymbol
    x, y : float or array_like
        Off-diagonal points.
    cross_check : bool
        Compute the partial-integration form too and raise
        ``DualFormError`` where |K1 - K2| > rtol max(|K1|, |K2|) + atol.

    Returns
    -------
    float, complex or ndarray
    """
    xb, yb = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    xf, yf = xb.ravel(), yb.ravel()
    k1 = MultiplierKernel(alpha, symbol, job)(xf, yf)
    if cross_check and symbol.dphi is not None:
        k2 = MultiplierKernel(alpha, symbol, job, form="dphi")(xf, yf)
        bad = np.abs(k1 - k2) > rtol * np.maximum(np.abs(k1), np.abs(k2)) + atol
        if np.any(bad):
            i = int(np.argmax(bad))
            raise DualFormError(f"kernel forms disagree at x={xf[i]}, y={yf[i]}: {k1[i]} vs {k2[i]}")
    if np.ndim(xb) == 0:
        return complex(k1[0]) if np.iscomplexobj(k1) else float(k1[0])
    return k1.reshape(xb.shape)


def dual_form_discrepancy(alpha, symbol, x, y, job=DEFAULT_TJOB):
    """Relative differences |K1 - K2| / max(|K1|, |K2|) at the given pairs."""
    k1 = MultiplierKernel(alpha, symbol, job)(np.asarray(x, float), np.asarray(y, float))
    k2 = MultiplierKernel(alpha, symbol, job, form="dphi")(np.asarray(x, float),
                                                           np.asarray(y, float))
    return np.abs(k1 - k2) / np.maximum(np.maximum(np.abs(k1), np.abs(k2)), 1e-300)


def q_truncated(f, symbol, eps, x, job=DEFAULT_TJOB, method="subtracted", warn=True):
    """Q_{phi,eps} f(x) = int_{|x-y|>eps} K_phi(x, y) f(y) dgamma_alpha(y) at a node."""
    val = truncated_at(MultiplierKernel(f.alpha, symbol, job), f, eps, x, method, warn)
    return complex(val) if np.iscomplexobj(val) else float(val)


def q_ladder_values(f, symbol, x, radii, job=DEFAULT_TJOB):
    """Q_{phi,eps} f(x) for every radius of a strictly decreasing list."""
    i = _node_index(f, x)
    op = TruncatedOperator(MultiplierKernel(f.alpha, symbol, job), f, rows=[i],
                           radii=np.asarray(radii))
    return op.ladder_values(np.asarray(f.values))[0]


def q_maximal_local(f, symbol, a, x, ladder, job=DEFAULT_TJOB):
    """Q_{phi,*,a} f(x): max of |Q_{phi,eps} f(x)| over ladder radii eps <= a m(x)."""
    radii = ladder_radii_below(ladder, a, x)
    return maximal_from_ladder(q_ladder_values(f, symbol, x, radii, job))


def q_truncated_callable(alpha, symbol, func, eps, x, job=DEFAULT_TJOB, x_max=8.0):
    """Q_{phi,eps} applied to a callable with a punctured Gauss rule in y."""
    y, w = punctured_rule(alpha, x, eps, x_max)
    k = MultiplierKernel(alpha, symbol, job)(np.full_like(y, x), y)
    return np.sum(k * w * func(y))


def band_limited(alpha, coeffs):
    """Callable sum_k b_k L_k for coefficients b_0, b_1, ..."""
    b = np.asarray(coeffs, dtype=float)

    def func(x):
        return np.tensordot(b, laguerre_all(alpha, len(b) - 1, np.asarray(x, float)), axes=1)

    return func


def spectral_multiplier_value(alpha, symbol, coeffs, x):
    """sum_k M(lambda_k) b_k L_k(x), with lambda_k = 2k + alpha + 1."""
    b = np.asarray(coeffs, dtype=float)
    lam = eigenvalue(alpha, np.arange(len(b)))
    m = symbol_M(symbol, lam)
    lk = laguerre_all(alpha, len(b) - 1, np.atleast_1d(float(x)))[:, 0]
    return np.sum(m * b * lk)


def zeros_of(func, lo=0.05, hi=4.0, n=400):
    """Sign-change roots of a real callable on [lo, hi], refined by brentq."""
    xs = np.linspace(lo, hi, n)
    v = func(xs)
    roots = []
    for i in np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)[0]:
        roots.append(brentq(func, xs[i], xs[i + 1], xtol=1e-14))
    return roots


def spectral_cross_check(alpha, symbol, coeffs, x, eps=1e-7, job=DEFAULT_TJOB, x_max=12.0):
    """Compare Q_{phi,eps} f(x) with the spectral value at a zero x of f.

    At a zero of f the correction term Lambda(eps) f(x) of the
    principal-value representation vanishes, so the truncated integral
    itself tends to sum_k M(lambda_k) b_k L_k(x).

    Returns
    -------
    (quad, spectral) : values of the truncated integral and the series.
    """
    func = band_limited(alpha, coeffs)
    quad = q_truncated_callable(alpha, symbol, func, eps, x, job, x_max)
    return quad, spectral_multiplier_value(alpha, symbol, coeffs, x)


__all__ = [
    "DualFormError", "LaplaceSymbol", "MultiplierKernel", "SymbolHypothesisError",
    "band_limited", "constant_symbol", "dual_form_discrepancy", "exp_symbol",
    "imaginary_power_symbol", "multiplier_kernel", "q_ladder_values", "q_maximal_local",
    "q_truncated", "q_truncated_callable", "rational_symbol", "sin_exp_symbol",
    "spectral_cross_check", "spectral_multiplier_value", "symbol_M", "symbol_from_name",
    "symbol_hypothesis", "zeros_of",
]
