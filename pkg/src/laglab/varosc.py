"""Exact rho-variation and lacunary oscillation on finite ladders.

Values may be real or complex; all increments use the modulus.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

BRUTE_FORCE_MAX = 14


@dataclass(frozen=True)
class ValueLadder:
    """Operator values c_eps on strictly decreasing radii eps."""

    radii: tuple
    values: tuple

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if len(r) != len(self.values):
            raise ValueError("radii and values must have equal length")
        if len(r) == 0:
            raise ValueError("empty ladder")
        if np.any(np.diff(r) >= 0) or np.any(r <= 0):
            raise ValueError("radii must be positive and strictly decreasing")
        object.__setattr__(self, "radii", tuple(float(v) for v in r))
        object.__setattr__(self, "values", tuple(self.values))

    def array(self):
        return np.asarray(self.values)


def _variation_power_batch(c, rho):
    """max over subsequences of sum |c_j - c_{j+1}|^rho, along the last axis.

    best[i] = max(0, max_{j<i} best[j] + |c_i - c_j|^rho); O(n^2) per ladder.
    """
    c = np.asarray(c)
    n = c.shape[-1]
    best = np.zeros(c.shape, dtype=float)
    for i in range(1, n):
        inc = np.abs(c[..., i:i + 1] - c[..., :i]) ** rho
        best[..., i] = np.maximum(0.0, np.max(best[..., :i] + inc, axis=-1))
    return np.max(best, axis=-1)


def rho_variation(v, rho):
    """Exact rho-variation of a finite ladder by dynamic programming.

    Parameters
    ----------
    v : ValueLadder or array_like
        Values ordered by decreasing radius.
    rho : float
        Exponent, rho > 1.

    Returns
    -------
    float

    Examples
    --------
    >>> round(rho_variation([0.0, 1.0, 0.0], 3), 12) == round(2 ** (1 / 3), 12)
    True
    """
    if not rho > 1:
        raise ValueError("rho must exceed 1")
    c = v.array() if isinstance(v, ValueLadder) else np.asarray(v)
    return float(_variation_power_batch(c, rho) ** (1.0 / rho))


def rho_variation_batch(values, rho):
    """rho-variation along the last axis of an array of ladders."""
    if not rho > 1:
        raise ValueError("rho must exceed 1")
    return _variation_power_batch(values, rho) ** (1.0 / rho)


def brute_force_variation(v, rho):
    """rho-variation by enumerating every subsequence (length <= 14)."""
    c = v.array() if isinstance(v, ValueLadder) else np.asarray(v)
    n = len(c)
    if n > BRUTE_FORCE_MAX:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_MAX} points")
    best = 0.0
    for size in range(2, n + 1):
        for idx in itertools.combinations(range(n), size):
            sub = c[list(idx)]
            best = max(best, float(np.sum(np.abs(np.diff(sub)) ** rho)))
    return best ** (1.0 / rho)


def block_indices(radii, theta):
    """Block j with theta^j <= eps < theta^(j+1) for every radius."""
    r = np.asarray(radii, dtype=float)
    return np.floor(np.log(r) / math.log(theta) + 1e-12).astype(int)


def _block_diameters(c, blocks):
    out = []
    for b in np.unique(blocks):
        sel = c[..., blocks == b]
        if sel.shape[-1] < 2:
            continue
        if np.iscomplexobj(sel):
            diff = np.abs(sel[..., :, None] - sel[..., None, :])
            out.append(np.max(diff, axis=(-1, -2)))
        else:
            out.append(np.max(sel, axis=-1) - np.min(sel, axis=-1))
    return out


def oscillation(v, theta=None, blocks=None):
    """Lacunary oscillation: l^2 sum over blocks of the block diameter.

    Parameters
    ----------
    v : ValueLadder
    theta : float, optional
        Base of the blocks [theta^j, theta^(j+1)).
    blocks : array_like of int, optional
        Explicit block label per radius (overrides theta).

    Returns
    -------
    float
        Blocks holding fewer than two radii contribute 0.
    """
    c = v.array()
    if blocks is None:
        if theta is None or not theta > 1:
            raise ValueError("need theta > 1 or explicit blocks")
        blocks = block_indices(v.radii, theta)
    parts = _block_diameters(c, np.asarray(blocks))
    return float(math.sqrt(sum(p * p for p in parts))) if parts else 0.0


def oscillation_batch(values, radii, theta):
    """Oscillation along the last axis for ladders sharing one radius list."""
    blocks = block_indices(radii, theta)
    parts = _block_diameters(np.asarray(values), blocks)
    if not parts:
        return np.zeros(np.shape(values)[:-1])
    return np.sqrt(np.sum(np.stack(parts) ** 2, axis=0))


def admissible_slice(radii, bound):
    r = np.asarray(radii)
    keep = r <= bound * (1 + 1e-12)
    if not np.any(keep):
        raise ValueError("no ladder radius at or below a m(x)")
    return keep


def local_variation_op(operator, rho, a, x, radii):
    """rho-variation of eps -> T_eps f(x) over ladder radii <= a m(x).

    Parameters
    ----------
    operator : callable
        ``operator(radii)`` returning T_eps f(x) for each radius.
    rho, a : float
    x : float
        Evaluation point.
    radii : array_like
        Strictly decreasing ladder.
    """
    keep = admissible_slice(radii, a * min(1.0, 1.0 / x))
    r = np.asarray(radii)[keep]
    return rho_variation(ValueLadder(tuple(r), tuple(operator(r))), rho)


def local_oscillation_op(operator, theta, a, x, radii):
    """Oscillation of eps -> T_eps f(x) over blocks inside (0, a m(x)]."""
    keep = admissible_slice(radii, a * min(1.0, 1.0 / x))
    r = np.asarray(radii)[keep]
    return oscillation(ValueLadder(tuple(r), tuple(operator(r))), theta)
