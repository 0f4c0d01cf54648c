import math

import numpy as np
import pytest

from laglab.varosc import (ValueLadder, block_indices, brute_force_variation,
                           local_oscillation_op, local_variation_op, oscillation,
                           oscillation_batch, rho_variation, rho_variation_batch)


def lad(values, radii=None):
    n = len(values)
    radii = radii if radii is not None else tuple(1.0 / (k + 1) for k in range(n))
    return ValueLadder(tuple(radii), tuple(values))


def test_variation_examples():
    assert rho_variation(lad([2.0, 2.0, 2.0]), 3) == 0
    assert rho_variation(lad([0.0, 1.0, 0.0]), 3) == pytest.approx(2 ** (1 / 3), abs=1e-15)
    assert rho_variation(lad([0.0, 1.0, 3.0]), 2) == pytest.approx(3.0, abs=1e-15)
    assert brute_force_variation(lad([0.0, 1.0]), 2.5) == pytest.approx(1.0)
    assert brute_force_variation(lad([5.0] * 4), 2.5) == 0


def test_dp_matches_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(1, 11))
        v = lad(list(rng.standard_normal(n)))
        for rho in (2.5, 3.0, 5.0):
            assert abs(rho_variation(v, rho) - brute_force_variation(v, rho)) <= 1e-12


def test_complex_values_use_modulus():
    v = lad([0.0, 1j, 1 + 1j])
    assert rho_variation(v, 2) == pytest.approx(brute_force_variation(v, 2), abs=1e-14)
    assert rho_variation(v, 2) == pytest.approx(math.sqrt(2), abs=1e-14)


def test_monotone_in_rho_and_scaling():
    rng = np.random.default_rng(1)
    for _ in range(100):
        v = lad(list(rng.standard_normal(int(rng.integers(2, 30)))))
        vals = [rho_variation(v, r) for r in (1.5, 2, 3, 5, 9)]
        assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))
        s = -2.5
        scaled = lad([s * c for c in v.values], v.radii)
        assert rho_variation(scaled, 3) == pytest.approx(abs(s) * rho_variation(v, 3), rel=1e-14)


def test_oscillation_examples():
    one_block = ValueLadder((1.9, 1.5, 1.1), (0.0, 2.0, 1.0))
    assert oscillation(one_block, blocks=[0, 0, 0]) == 2.0
    assert oscillation(one_block, theta=2.0) == 2.0
    assert oscillation(lad([1.0, 1.0, 1.0]), 2.0) == 0.0
    two = ValueLadder((3.0, 1.5), (0.0, 7.0))
    assert oscillation(two, theta=2.0) == 0.0


def test_oscillation_below_v2():
    rng = np.random.default_rng(2)
    for _ in range(100):
        n = int(rng.integers(2, 40))
        radii = np.sort(rng.uniform(1e-3, 1, n))[::-1]
        v = ValueLadder(tuple(radii), tuple(rng.standard_normal(n)))
        assert oscillation(v, 2.0) <= rho_variation(v, 2) + 1e-12


def test_batches_match_scalar():
    rng = np.random.default_rng(3)
    vals = rng.standard_normal((4, 12))
    radii = np.geomspace(1, 1e-3, 12)
    vb = rho_variation_batch(vals, 3)
    ob = oscillation_batch(vals, radii, 2.0)
    for i in range(4):
        v = ValueLadder(tuple(radii), tuple(vals[i]))
        assert vb[i] == pytest.approx(rho_variation(v, 3), rel=1e-14)
        assert ob[i] == pytest.approx(oscillation(v, 2.0), rel=1e-14)


def test_block_indices():
    assert list(block_indices([4.0, 3.9, 2.0, 1.0, 0.5], 2.0)) == [2, 1, 1, 0, -1]


def test_local_operators():
    radii = np.geomspace(2.0, 1e-3, 12)

    def zero(r):
        return np.zeros(len(r))

    assert local_variation_op(zero, 3, 1.0, 0.5, radii) == 0
    assert local_oscillation_op(zero, 2.0, 1.0, 0.5, radii) == 0

    def op(r):
        return np.sin(5 * np.log(r))

    x = 2.0
    keep = radii <= 0.5 * (1 + 1e-12)
    v = local_variation_op(op, 3, 1.0, x, radii)
    assert v == pytest.approx(brute_force_variation(op(radii[keep]), 3), abs=1e-12)
    c = op(radii[keep])
    assert v >= np.max(np.abs(c[:, None] - c[None, :])) - 1e-12
    assert local_oscillation_op(op, 2.0, 1.0, x, radii) <= \
        local_variation_op(op, 2.0, 1.0, x, radii) + 1e-12
    with pytest.raises(ValueError):
        local_variation_op(op, 3, 1e-6, x, radii)


def test_validation():
    with pytest.raises(ValueError):
        ValueLadder((1.0, 2.0), (0.0, 1.0))
    with pytest.raises(ValueError):
        rho_variation(lad([0.0, 1.0]), 1.0)
    with pytest.raises(ValueError):
        brute_force_variation(lad(list(range(15))), 2)
