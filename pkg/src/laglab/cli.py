"""Experiment harness: configuration, test-function families, suites and CSV reports.

Every subcommand writes ``<out>/<subcommand>.csv`` plus a manifest holding
the fully resolved configuration, and exits with 0 exactly when every
acceptance flag in its report passes (2 on a configuration error).
"""

import argparse
import csv
import io
import math
import os
import sys
import time
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .blo_spaces import (a_sweep, blo_seminorm, bmo_seminorm, build_family, prop21_check,
                         prop22_study, standard_test_set)
from .czdecomp import cz_gradient_ratio, local_riesz_kernel
from .gridquad import QuadratureSpec, ResolutionError, build_grid, l1_norm, l2_norm
from .heat import apply_heat, heat_closed, heat_matrix, heat_s_rep, heat_series, laguerre_operator
from .measure import m_alpha_mass, m_of
from .multiplier import (MultiplierKernel, SymbolHypothesisError, band_limited,
                         dual_form_discrepancy, spectral_cross_check, symbol_from_name,
                         symbol_hypothesis, zeros_of)
from .riesz import near_diagonal_sample, riesz_truncated_callable, scaled_kernel_ratio
from .specfun import eigenvalue, laguerre_all, laguerre_derivative, laguerre_eval
from .truncation import RieszKernel, TruncatedOperator
from .varosc import (ValueLadder, brute_force_variation, oscillation, oscillation_batch,
                     rho_variation, rho_variation_batch)

SUBCOMMANDS = ("kernels", "riesz", "variation", "multiplier", "blo", "theorem11", "theorem12")
FAMILIES = ("random-steps", "indicator", "sign-laguerre", "smooth-bump", "constant")
THEOREM_COLUMNS = ("family", "index", "operator", "seminorm", "l1norm", "total", "resolution",
                   "stability_ratio", "pass")
CHECK_COLUMNS = ("suite", "check", "subject", "value", "tolerance", "resolution", "pass")

TOLERANCES = {
    "default": {
        "orthonormality": 1e-6, "heat_series": 1e-6, "heat_s_rep": 1e-6, "semigroup": 1e-4,
        "eigen": 1e-5, "laguerre_fd": 1e-4, "dual_form": 1e-5, "spectral": 1e-3,
        "riesz_identity": 1e-3, "exact": 1e-12, "prop22_gap": 0.1, "cz_stability": 0.2,
        "stability_lo": 0.85, "stability_hi": 1.15,
    },
    "strict": {
        "orthonormality": 1e-8, "heat_series": 1e-8, "heat_s_rep": 1e-8, "semigroup": 1e-6,
        "eigen": 1e-7, "laguerre_fd": 1e-5, "dual_form": 1e-7, "spectral": 1e-4,
        "riesz_identity": 1e-4, "exact": 1e-12, "prop22_gap": 0.05, "cz_stability": 0.1,
        "stability_lo": 0.9, "stability_hi": 1.1,
    },
}


class ConfigError(ValueError):
    """Invalid experiment configuration; no run takes place."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved parameters of one harness run.

    Grid: ``grid_panels`` uniform panels on [1, 8], ``grid_geometric``
    geometric panels on (0, 1], ``grid_points`` nodes per panel. Ladder:
    ``ladder_density`` radii per decade over ``ladder_decades`` decades
    below a m(x). Family: ``family`` (optionally ``name:args``), ``count``
    members, ``seed``. ``refine`` is the number of doubling levels.
    """

    alpha: float = 0.0
    a: float = 1.0
    rho: float = 3.0
    theta: float = 2.0
    grid_panels: int = 28
    grid_geometric: int = 20
    grid_points: int = 8
    ladder_density: int = 40
    ladder_decades: float = 4.0
    family: str = "random-steps"
    count: int = 20
    seed: int = 7
    out: str = "laglab-out"
    refine: int = 1
    tol_profile: str = "default"
    symbol: str = "exp"
    sample: int = 50

    def validate(self, theorem11=False):
        if not self.alpha > -0.5:
            raise ConfigError("alpha must exceed -1/2")
        if not self.a > 0:
            raise ConfigError("a must be positive")
        if not self.theta > 1:
            raise ConfigError("theta must exceed 1")
        if not self.rho > (2 if theorem11 else 1):
            raise ConfigError(f"rho must exceed {2 if theorem11 else 1}")
        if self.grid_panels < 1 or self.grid_geometric < 1 or self.grid_points < 2:
            raise ConfigError("grid needs >= 1 panel of each kind and >= 2 points per panel")
        if self.ladder_density < 1 or not self.ladder_decades > 0:
            raise ConfigError("ladder density and span must be positive")
        if self.count < 1 or self.sample < 1:
            raise ConfigError("count and sample must be positive")
        if not 0 <= self.refine <= 3:
            raise ConfigError("refine must lie in 0..3")
        if self.tol_profile not in TOLERANCES:
            raise ConfigError(f"unknown tolerance profile {self.tol_profile!r}")
        if self.family.partition(":")[0] not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}")
        return self

    @property
    def tol(self):
        return TOLERANCES[self.tol_profile]

    def grid_spec(self, level=0):
        spec = QuadratureSpec(n_uniform=self.grid_panels, n_geometric=self.grid_geometric,
                              points=self.grid_points)
        return spec.refined(level) if level else spec

    def manifest(self, subcommand):
        lines = [f"subcommand = {subcommand}"]
        lines += [f"{f.name} = {getattr(self, f.name)}" for f in fields(self)]
        lines += [f"tol.{k} = {v!r}" for k, v in sorted(self.tol.items())]
        return "\n".join(lines) + "\n"


_CONVERTERS = {f.name: type(f.default) for f in fields(ExperimentConfig)}


def _coerce(key, raw):
    key = key.strip().replace("-", "_")
    if key not in _CONVERTERS:
        raise ConfigError(f"unknown configuration key {key!r}")
    conv = _CONVERTERS[key]
    try:
        return key, conv(raw.strip()) if conv is not int else int(str(raw).strip())
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc


def parse_config_text(text):
    """key = value lines; '#' starts a comment; blank lines are ignored."""
    out = {}
    for num, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise ConfigError(f"line {num}: expected key = value")
        k, v = _coerce(key, val)
        out[k] = v
    return out


def load_config(path=None, overrides=None):
    """File values first, then non-None overrides."""
    values = {}
    if path:
        with open(path, encoding="utf-8") as fh:
            values.update(parse_config_text(fh.read()))
    for k, v in (overrides or {}).items():
        if v is not None:
            values[_coerce(k, str(v))[0]] = v
    return ExperimentConfig(**values)


# -- test-function families ----------------------------------------------------

@dataclass(frozen=True)
class TestFunction:
    """A callable with sup |f| = 1 and a label for the report."""

    family: str
    index: int
    func: object = field(compare=False)
    label: str = ""


def _step_function(breaks, values):
    b = np.asarray(breaks, float)
    v = np.asarray(values, float)

    def func(x):
        i = np.clip(np.searchsorted(b, np.asarray(x, float), side="right") - 1, 0, len(v) - 1)
        return v[i]

    return func


def random_steps(rng, count, a=1.0, x_max=8.0):
    """+-1 on partitions with piece lengths a m(x) U(0.3, 1.5); first break U(0.2, 1)."""
    out = []
    for _ in range(count):
        br = [0.0, rng.uniform(0.2, 1.0)]
        while br[-1] < x_max:
            br.append(br[-1] + a * m_of(br[-1]) * rng.uniform(0.3, 1.5))
        vals = rng.choice([-1.0, 1.0], size=len(br) - 1)
        out.append(_step_function(br, vals))
    return out


def indicator(c, d):
    """1 on [c, d), 0 elsewhere."""
    if not 0 <= c < d:
        raise ConfigError("indicator needs 0 <= c < d")
    return _step_function([0.0, c, d], [0.0, 1.0, 0.0])


def sign_laguerre(alpha, k):
    """sign(L_k(x)), with value 1 at the (measure-zero) zeros."""
    def func(x):
        return np.where(laguerre_eval(alpha, k, np.asarray(x, float)) < 0, -1.0, 1.0)

    return func


def smooth_bump(c, w):
    """exp(-((x - c)/w)^2); the peak value 1 is attained at x = c > 0."""
    def func(x):
        return np.exp(-((np.asarray(x, float) - c) / w) ** 2)

    return func


def make_family(cfg):
    """Members of ``cfg.family`` as TestFunction objects.

    ``indicator:c,d`` and ``sign-laguerre:k`` give one fixed member;
    without arguments the parameters are drawn from ``cfg.seed``.
    """
    name, _, args = cfg.family.partition(":")
    rng = np.random.default_rng(cfg.seed)
    if name == "random-steps":
        funcs = random_steps(rng, cfg.count, cfg.a)
    elif name == "indicator":
        if args:
            c, d = (float(v) for v in args.split(","))
            funcs = [indicator(c, d)]
        else:
            cs = rng.uniform(0.0, 4.0, cfg.count)
            funcs = [indicator(c, c + rng.uniform(0.1, 2.0)) for c in cs]
    elif name == "sign-laguerre":
        ks = [int(args)] if args else range(1, cfg.count + 1)
        funcs = [sign_laguerre(cfg.alpha, k) for k in ks]
    elif name == "smooth-bump":
        cs = rng.uniform(0.2, 4.0, cfg.count)
        funcs = [smooth_bump(c, cfg.a * m_of(c) * rng.uniform(0.1, 1.0)) for c in cs]
    elif name == "constant":
        funcs = [lambda x: np.ones_like(np.asarray(x, float))]
    else:
        raise ConfigError(f"unknown family {cfg.family!r}")
    return [TestFunction(cfg.family, i, f) for i, f in enumerate(funcs)]


# -- reports ------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".10g")
    if v is None:
        return ""
    return str(v)


@dataclass
class ExperimentReport:
    """Rows of one run plus summary constants.

    Each row's ``ok`` entry (the ``pass`` column) is True, False or "diag"
    (diagnostic, never gating).
    """

    subcommand: str
    columns: tuple
    rows: list = field(default_factory=list)
    constants: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def add(self, **row):
        self.rows.append(row)

    @property
    def passed(self):
        return all(r["ok"] is True for r in self.rows if r["ok"] != "diag")

    def failures(self):
        return [r for r in self.rows if r["ok"] is False]

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_fmt(r.get("ok" if c == "pass" else c)) for c in self.columns])
        return buf.getvalue()


def _check(report, check, subject, value, tolerance, resolution="", ok=None, diag=False):
    """Append a check row; by default the flag is value <= tolerance."""
    if diag:
        flag = "diag"
    elif ok is None:
        flag = bool(np.isfinite(value) and value <= tolerance)
    else:
        flag = bool(ok)
    report.add(suite=report.subcommand, check=check, subject=subject, value=value,
               tolerance=tolerance, resolution=resolution, ok=flag)
    return flag


# -- kernels ------------------------------------------------------------------

def run_kernel_validation(cfg):
    """Orthonormality, heat-kernel representations, semigroup, eigenrelations, dual form."""
    cfg.validate()
    t0 = time.perf_counter()
    tol = cfg.tol
    al = cfg.alpha
    rep = ExperimentReport("kernels", CHECK_COLUMNS)
    rng = np.random.default_rng(cfg.seed)
    scale = cfg.grid_panels / ExperimentConfig.grid_panels

    g = build_grid(al, QuadratureSpec.for_degree(30, al))
    lk = laguerre_all(al, 15, g.nodes)
    gram = (lk * np.asarray(g.weights)) @ lk.T
    _check(rep, "orthonormality", "k<=15", float(np.max(np.abs(gram - np.eye(16)))),
           tol["orthonormality"], f"nodes={len(g)}")

    n = cfg.sample
    x, y = rng.uniform(0.01, 4.0, n), rng.uniform(0.01, 4.0, n)
    t = rng.uniform(0.3, 3.0, n)
    c = heat_closed(al, t, x, y)
    _check(rep, "heat closed vs series", "K=60 t in [0.3,3]",
           float(np.max(np.abs(c - heat_series(al, t, x, y, K=60)) / np.abs(c))),
           tol["heat_series"], f"pairs={n}")
    t = np.exp(rng.uniform(math.log(0.05), math.log(3.0), n))
    c = heat_closed(al, t, x, y)
    _check(rep, "heat closed vs s-representation", "t in [0.05,3]",
           float(np.max(np.abs(c - heat_s_rep(al, t, x, y)) / np.abs(c))),
           tol["heat_s_rep"], f"pairs={n}")

    spec = cfg.grid_spec()
    g = build_grid(al, spec)
    f = g.with_values(band_limited(al, rng.standard_normal(11))(g.nodes))
    w5 = apply_heat(f, 0.5)
    w32 = apply_heat(apply_heat(f, 0.2), 0.3)
    _check(rep, "semigroup", "W0.3 W0.2 vs W0.5, k<=10",
           l2_norm(w32.with_values(np.asarray(w32.values) - w5.values)) / l2_norm(w5),
           tol["semigroup"], f"nodes={len(g)}")

    deg = QuadratureSpec.for_degree(20, al)
    gi = build_grid(al, replace(deg, n_uniform=max(1, round(deg.n_uniform * scale)),
                                n_geometric=cfg.grid_geometric, points=cfg.grid_points))
    xs = np.asarray(gi.nodes)[np.asarray(gi.nodes) <= 4.0]
    lg, lx = laguerre_all(al, 10, gi.nodes), laguerre_all(al, 10, xs)
    lam = eigenvalue(al, np.arange(11))
    err = 0.0
    for tt in (0.1, 0.5, 1.0):
        e = heat_matrix(al, tt, xs, gi) @ lg.T - np.exp(-lam * tt)[None, :] * lx.T
        err = max(err, float(np.max(np.abs(e))))
    _check(rep, "eigenrelation", "k<=10 t in {0.1,0.5,1} x<=4", err, tol["eigen"],
           f"nodes={len(gi)}")

    xf = np.linspace(0.2, 4.0, 40)
    fd = 0.0
    for k in range(7):
        lhs = laguerre_operator(al, lambda u, k=k: laguerre_eval(al, k, u), xf)
        rhs = eigenvalue(al, k) * laguerre_eval(al, k, xf)
        fd = max(fd, float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs)))))
    _check(rep, "laguerre operator finite difference", "k<=6", fd, tol["laguerre_fd"], "h=1e-4")

    dx, dy = _off_diagonal_pairs(rng, n)
    _check(rep, "dual form", "exp", float(np.max(dual_form_discrepancy(
        al, symbol_from_name("exp"), dx, dy))), tol["dual_form"], f"pairs={n}")
    rep.wall_time = time.perf_counter() - t0
    return rep


def _off_diagonal_pairs(rng, n, lo=0.1, hi=4.0, gap=0.05):
    xs, ys = [], []
    while len(xs) < n:
        u, v = rng.uniform(lo, hi, 2)
        if abs(u - v) > gap:
            xs.append(u)
            ys.append(v)
    return np.array(xs), np.array(ys)


# -- riesz --------------------------------------------------------------------

def riesz_identity_error(alpha, x, eps=1e-3):
    """|R_eps L_1(x) - lambda_1^{-1/2} L_1'(x)| / max(1, |L_1'(x)|)."""
    val = riesz_truncated_callable(alpha, lambda u: laguerre_eval(alpha, 1, u), eps, x)
    d = float(laguerre_derivative(alpha, 1, x))
    return abs(val - d / math.sqrt(eigenvalue(alpha, 1))) / max(1.0, abs(d))


def cz_ratio_pair(alpha, n, seed, kind):
    """CZ ratio sup over n pairs and over 2n pairs (the 2n draw extends the n draw).

    Half of the pairs come from the edge stratum of ``near_diagonal_sample``,
    where the gradient ratio attains its supremum.
    """
    x, y = near_diagonal_sample(2 * n, seed=seed, edge_fraction=0.5)
    if kind == "scaled":
        def ratio(u, v):
            return scaled_kernel_ratio(alpha, u, v)
    else:
        def kern(u, v):
            return local_riesz_kernel(alpha, u, v, scaled=True)

        def meas(u, r):
            return m_alpha_mass(alpha, u, r)

        def ratio(u, v):
            return cz_gradient_ratio(kern, u, v, meas)
    first = ratio(x[:n], y[:n])
    return first, max(first, ratio(x[n:], y[n:]))


def run_riesz_suite(cfg):
    """Spectral identity of R_eps on L_1 and CZ-ratio stability under sample doubling."""
    cfg.validate()
    t0 = time.perf_counter()
    tol = cfg.tol
    rep = ExperimentReport("riesz", CHECK_COLUMNS)
    for x in (0.5, 1.0, 2.0):
        _check(rep, "spectral identity", f"x={x}", riesz_identity_error(cfg.alpha, x),
               tol["riesz_identity"], "eps=1e-3")
    for kind, n in (("scaled", 10 * cfg.sample), ("gradient", 10 * cfg.sample)):
        r1, r2 = cz_ratio_pair(cfg.alpha, n, cfg.seed, kind)
        rel = abs(r2 / r1 - 1.0) if r1 > 0 else math.inf
        _check(rep, f"cz {kind} ratio", f"n={n}", r1, 0.0, f"pairs={n}", diag=True)
        _check(rep, f"cz {kind} ratio", f"n={2 * n}", r2, 0.0, f"pairs={2 * n}", diag=True)
        _check(rep, f"cz {kind} ratio doubling", f"n={n}->{2 * n}", rel, tol["cz_stability"])
    rep.wall_time = time.perf_counter() - t0
    return rep


# -- variation ----------------------------------------------------------------

def random_ladder(rng, length, complex_values=False):
    radii = np.sort(rng.uniform(1e-3, 1.0, length))[::-1]
    while np.any(np.diff(radii) >= 0):
        radii = np.sort(rng.uniform(1e-3, 1.0, length))[::-1]
    vals = rng.standard_normal(length)
    if complex_values:
        vals = vals + 1j * rng.standard_normal(length)
    return ValueLadder(tuple(radii), tuple(vals))


def run_variation_suite(cfg):
    """DP against brute force; V_rho monotone in rho; O <= V_2."""
    cfg.validate()
    t0 = time.perf_counter()
    ex = cfg.tol["exact"]
    rep = ExperimentReport("variation", CHECK_COLUMNS)
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for _ in range(200):
        lad = random_ladder(rng, int(rng.integers(1, 11)), bool(rng.integers(0, 2)))
        for rho in (2.5, 3.0, 5.0):
            worst = max(worst, abs(rho_variation(lad, rho) - brute_force_variation(lad, rho)))
    _check(rep, "dp vs brute force", "200 ladders rho in {2.5,3,5}", worst, ex)
    mono, osc = -math.inf, -math.inf
    rhos = (1.5, 2.0, 2.5, 3.0, 5.0, 8.0)
    for _ in range(100):
        lad = random_ladder(rng, int(rng.integers(2, 41)), bool(rng.integers(0, 2)))
        v = [rho_variation(lad, r) for r in rhos]
        mono = max(mono, max(v[i + 1] - v[i] for i in range(len(v) - 1)))
        osc = max(osc, oscillation(lad, cfg.theta) - v[1])
    _check(rep, "V_rho non-increasing in rho", "100 ladders", mono, ex)
    _check(rep, "oscillation <= V_2", "100 ladders", osc, ex)
    rep.wall_time = time.perf_counter() - t0
    return rep


# -- multiplier ---------------------------------------------------------------

def run_multiplier_suite(cfg):
    """Symbol hypothesis, dual-form agreement, spectral cross-check at zeros of f."""
    cfg.validate()
    t0 = time.perf_counter()
    tol = cfg.tol
    al = cfg.alpha
    rep = ExperimentReport("multiplier", CHECK_COLUMNS)
    rng = np.random.default_rng(cfg.seed)
    for name in ("exp", "imaginary-power:1"):
        sym = symbol_from_name(name)
        const = symbol_hypothesis(sym)
        _check(rep, "symbol hypothesis", name, const, math.inf, ok=np.isfinite(const))
    try:
        symbol_hypothesis(symbol_from_name("sin-exp"))
        rejected = False
    except SymbolHypothesisError:
        rejected = True
    _check(rep, "symbol hypothesis rejects", "sin-exp", float(rejected), 1.0, ok=rejected)
    x, y = _off_diagonal_pairs(rng, cfg.sample)
    coeffs = rng.standard_normal(6)
    zeros = zeros_of(band_limited(al, coeffs))[:3]
    for name in ("exp", "imaginary-power:1"):
        sym = symbol_from_name(name)
        _check(rep, "dual form", name, float(np.max(dual_form_discrepancy(al, sym, x, y))),
               tol["dual_form"], f"pairs={cfg.sample}")
        worst = 0.0 if zeros else math.inf
        for z in zeros:
            quad, spec = spectral_cross_check(al, sym, coeffs, z)
            worst = max(worst, abs(quad - spec) / max(1.0, abs(spec)))
        _check(rep, "spectral cross-check", name, worst, tol["spectral"], f"zeros={len(zeros)}")
    rep.wall_time = time.perf_counter() - t0
    return rep


# -- blo ----------------------------------------------------------------------

def run_blo_suite(cfg):
    """Containments, M_a identity gap under refinement, BLO-to-maximal ratio, a-sweep."""
    cfg.validate()
    t0 = time.perf_counter()
    tol = cfg.tol
    al, a = cfg.alpha, cfg.a
    rep = ExperimentReport("blo", CHECK_COLUMNS)
    g = build_grid(al, cfg.grid_spec())
    fam = build_family(g, a)
    res = f"nodes={len(g)}"
    for name, func in standard_test_set(al).items():
        f = g.with_values(func(g.nodes))
        blo = blo_seminorm(f, fam).value
        bmo = bmo_seminorm(f, fam).value
        sup = float(np.max(np.abs(f.values)))
        _check(rep, "bmo <= 2 blo", name, bmo - 2 * blo, tol["exact"], res)
        _check(rep, "blo <= 2 sup", name, blo - 2 * sup, tol["exact"], res)
        levels = prop22_study(al, func, a=a, levels=3)
        for lv in levels:
            _check(rep, "prop22 gap", name, lv.gap, tol["prop22_gap"],
                   f"level={lv.level} nodes={lv.nodes}", diag=lv.level > 0)
        gaps = [lv.gap for lv in levels]
        _check(rep, "prop22 gap strictly decreasing", name, max(np.diff(gaps)), 0.0,
               "levels=0..2", ok=all(b < a_ for a_, b in zip(gaps, gaps[1:])))
        p21 = prop21_check(f, fam)
        _check(rep, "prop21 ratio finite", name, p21.ratio, math.inf, res,
               ok=np.isfinite(p21.ratio))
        for av, bmo_a, blo_a in a_sweep(f, (0.5, 1.0, 2.0)):
            _check(rep, "a-sweep bmo", f"{name} a={av}", bmo_a, 0.0, res, diag=True)
            _check(rep, "a-sweep blo", f"{name} a={av}", blo_a, 0.0, res, diag=True)
    one = g.with_values(np.ones(len(g)))
    _check(rep, "constant blo", "f=1", blo_seminorm(one, fam).value, tol["exact"], res)
    _check(rep, "constant bmo", "f=1", bmo_seminorm(one, fam).value, tol["exact"], res)
    rep.wall_time = time.perf_counter() - t0
    return rep


# -- theorem experiments ------------------------------------------------------

def _ladder_outputs(op, vals, operators, rho, theta):
    """Grid outputs (nodes, members) of the requested maximal/variation/oscillation operators."""
    out = {}
    for name in operators:
        if name in ("R*", "Q*"):
            out[name] = np.max(np.abs(vals), axis=1)
        elif name == "V":
            out[name] = rho_variation_batch(np.moveaxis(vals, 1, 2), rho)
        elif name == "O":
            out[name] = np.stack([oscillation_batch(vals[k].T, op.radii[k], theta)
                                  for k in range(vals.shape[0])])
    return out


def _theorem_run(cfg, subcommand, kernel_of, operators):
    t0 = time.perf_counter()
    tol = cfg.tol
    members = make_family(cfg)
    rep = ExperimentReport(subcommand, THEOREM_COLUMNS)
    base = {}
    cemp = {}
    for level in range(cfg.refine + 1):
        g = build_grid(cfg.alpha, cfg.grid_spec(level))
        density = cfg.ladder_density * 2 ** level
        res = f"L{level}:nodes={len(g)}:ladder={density}"
        values = np.stack([np.asarray(m.func(g.nodes), float) for m in members], axis=1)
        op = TruncatedOperator(kernel_of(cfg.alpha), g, cfg.a, per_decade=density,
                               decades=cfg.ladder_decades, theta=cfg.theta)
        outs = _ladder_outputs(op, op.ladder_values(values), operators, cfg.rho, cfg.theta)
        fam = build_family(g, cfg.a)
        for name in operators:
            totals = []
            for m in members:
                gf = g.with_values(outs[name][:, m.index])
                try:
                    semi = blo_seminorm(gf, fam).value
                    l1 = l1_norm(gf)
                except ResolutionError:
                    semi = l1 = math.nan
                total = semi + l1
                totals.append(total)
                ratio = None
                if level:
                    ratio = total / base[name, m.index]
                else:
                    base[name, m.index] = total
                rep.add(family=m.family, index=m.index, operator=name, seminorm=semi,
                        l1norm=l1, total=total, resolution=res, stability_ratio=ratio,
                        ok=bool(np.isfinite(total)))
            cemp[name, level] = max(totals)
        cemp["all", level] = max(cemp[n, level] for n in operators)
        for name in (*operators, "all"):
            c = cemp[name, level]
            ratio = c / cemp[name, 0] if level else None
            ok = bool(np.isfinite(c))
            if level:
                ok = ok and tol["stability_lo"] <= ratio <= tol["stability_hi"]
            rep.add(family=cfg.family, index="C_emp", operator=name, seminorm=None, l1norm=None,
                    total=c, resolution=res, stability_ratio=ratio, ok=ok)
    rep.constants = {f"C_emp[{k[0]}]@L{k[1]}": v for k, v in cemp.items()}
    rep.wall_time = time.perf_counter() - t0
    return rep


def run_theorem11(cfg):
    """Empirical BLO_a + L^1 size of R_{*,a} f, V_{rho,a} f and O_a f over a unit-sup family."""
    cfg.validate(theorem11=True)
    return _theorem_run(cfg, "theorem11", RieszKernel, ("R*", "V", "O"))


def run_theorem12(cfg, symbol=None):
    """As run_theorem11 for Q_{phi,*,a}; the symbol hypothesis is checked first.

    Raises
    ------
    SymbolHypothesisError
        When sup |phi'(t)| t is not finite; nothing is computed.
    """
    cfg.validate()
    sym = symbol_from_name(symbol or cfg.symbol)
    symbol_hypothesis(sym)
    return _theorem_run(cfg, "theorem12", lambda al: MultiplierKernel(al, sym), ("Q*",))


RUNNERS = {
    "kernels": run_kernel_validation, "riesz": run_riesz_suite,
    "variation": run_variation_suite, "multiplier": run_multiplier_suite,
    "blo": run_blo_suite, "theorem11": run_theorem11, "theorem12": run_theorem12,
}


def write_report(report, cfg):
    """Write <out>/<subcommand>.csv and <out>/<subcommand>.manifest.txt; return the CSV path."""
    os.makedirs(cfg.out, exist_ok=True)
    path = os.path.join(cfg.out, f"{report.subcommand}.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(report.to_csv())
    with open(os.path.join(cfg.out, f"{report.subcommand}.manifest.txt"), "w",
              encoding="utf-8") as fh:
        fh.write(cfg.manifest(report.subcommand))
    return path


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; flags override it")
    common.add_argument("--alpha", type=float)
    common.add_argument("--a", type=float)
    common.add_argument("--rho", type=float)
    common.add_argument("--theta", type=float)
    common.add_argument("--grid-panels", type=int, help="uniform panels on [1, 8]")
    common.add_argument("--grid-geometric", type=int, help="geometric panels on (0, 1]")
    common.add_argument("--grid-points", type=int, help="nodes per panel")
    common.add_argument("--ladder-density", type=int, help="radii per decade")
    common.add_argument("--family", help=f"one of {', '.join(FAMILIES)}; name:args allowed")
    common.add_argument("--count", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--out")
    common.add_argument("--refine", type=int, help="doubling levels (0..3)")
    common.add_argument("--tol-profile", choices=sorted(TOLERANCES))
    common.add_argument("--symbol", help="exp, rational, constant, sin-exp, imaginary-power:eta")
    common.add_argument("--sample", type=int, help="sample size for pointwise checks")
    parser = argparse.ArgumentParser(prog="laglab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=RUNNERS[name].__doc__.splitlines()[0])
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        cfg = load_config(args.config, overrides)
        report = RUNNERS[args.command](cfg)
    except (ConfigError, SymbolHypothesisError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    path = write_report(report, cfg)
    bad = report.failures()
    for r in bad:
        print("FAIL", ", ".join(f"{k}={_fmt(v)}" for k, v in r.items()), file=sys.stderr)
    print(f"{args.command}: {len(report.rows)} rows, {len(bad)} failing, "
          f"{report.wall_time:.1f} s -> {path}")
    return 0 if report.passed else 1


__all__ = [
    "CHECK_COLUMNS", "ConfigError", "ExperimentConfig", "ExperimentReport", "THEOREM_COLUMNS",
    "TestFunction", "build_parser", "cz_ratio_pair", "indicator", "load_config", "main",
    "make_family", "parse_config_text", "random_ladder", "random_steps", "riesz_identity_error",
    "run_blo_suite", "run_kernel_validation", "run_multiplier_suite", "run_riesz_suite",
    "run_theorem11", "run_theorem12", "run_variation_suite", "sign_laguerre", "smooth_bump",
    "write_report",
]
