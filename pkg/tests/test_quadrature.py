from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from fbwocp.basis import BasisSpec, breakpoints, eval_wavelet
from fbwocp.quadrature import (
    gauss_jacobi_rl_oracle,
    gauss_legendre,
    graded_panels,
    integrate_piecewise,
    rl_integral_monomial,
    rl_integral_shifted,
)


def test_legendre_small_orders():
    r = gauss_legendre(1)
    np.testing.assert_allclose(r.nodes, [0.0], atol=1e-16)
    np.testing.assert_allclose(r.weights, [2.0])
    r = gauss_legendre(2)
    np.testing.assert_allclose(np.sort(r.nodes), [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
    np.testing.assert_allclose(r.weights, [1.0, 1.0], atol=1e-15)
    r = gauss_legendre(5)
    assert np.dot(r.weights, r.nodes ** 8) == pytest.approx(2 / 9, abs=1e-14)


@pytest.mark.parametrize("Q", [3, 10, 40, 128])
def test_legendre_against_numpy(Q):
    r = gauss_legendre(Q)
    x, w = np.polynomial.legendre.leggauss(Q)
    order = np.argsort(r.nodes)
    np.testing.assert_allclose(r.nodes[order], x, atol=1e-14)
    np.testing.assert_allclose(r.weights[order], w, atol=1e-14)
    assert r.weights.sum() == pytest.approx(2.0, abs=1e-14)
    for d in range(0, 2 * Q, max(1, Q // 3)):
        exact = 0.0 if d % 2 else 2 / (d + 1)
        assert np.dot(r.weights, r.nodes ** d) == pytest.approx(exact, abs=1e-12)


def test_legendre_bounds():
    for Q in (0, 129):
        with pytest.raises(ValueError):
            gauss_legendre(Q)


def test_integrate_piecewise():
    assert integrate_piecewise(lambda z: np.ones_like(z), [0, 1], 3) == pytest.approx(1.0, abs=1e-15)
    assert integrate_piecewise(lambda z: z ** 2, [0, 0.3, 1], 4) == pytest.approx(1 / 3, abs=1e-14)
    spec = BasisSpec(2, 3, 0.9)
    f = lambda z: eval_wavelet(1, 1, z, spec) * eval_wavelet(1, 2, z, spec)
    assert integrate_piecewise(f, breakpoints(spec), 40) == pytest.approx(0.0903579, abs=2e-6)
    for bad in ([0.1, 1], [0, 0.5], [0, 0.6, 0.4, 1]):
        with pytest.raises(ValueError):
            integrate_piecewise(np.sin, bad, 4)


def test_graded_panels():
    g = graded_panels([0.0, 0.5, 1.0], levels=3, ratio=0.1)
    assert g[0] == 0.0 and g[-1] == 1.0 and np.all(np.diff(g) > 0)
    assert 0.5 in g
    np.testing.assert_allclose(g[1:4], [0.0005, 0.005, 0.05])


def test_rl_examples():
    z = np.linspace(0, 1, 11)
    for mu in (0.3, 0.9, 1.0):
        np.testing.assert_allclose(rl_integral_monomial(mu, 0.0, 0.0, 1.0, z), z ** mu / math.gamma(mu + 1), rtol=1e-12)
    np.testing.assert_allclose(rl_integral_monomial(1.0, 1.0, 0.0, 1.0, z), z ** 2 / 2, rtol=1e-12)
    ref = gauss_jacobi_rl_oracle(0.9, 0.9, 0.5, 1.0, 0.7)
    assert rl_integral_monomial(0.9, 0.9, 0.5, 1.0, 0.7) == pytest.approx(ref, abs=1e-9)
    assert rl_integral_monomial(0.5, 2.0, 0.4, 0.8, 0.3) == 0.0
    assert gauss_jacobi_rl_oracle(0.5, 2.0, 0.4, 0.8, 0.3) == 0.0


def test_rl_direct_integration():
    # adaptive QUADPACK integration, the kernel is smooth on [a, b] since z > b
    mu, p, a, b, z = 0.6, 1.7, 0.2, 0.55, 0.8
    ref, _ = integrate.quad(lambda s: (z - s) ** (mu - 1) * s ** p, a, b, limit=200)
    assert rl_integral_monomial(mu, p, a, b, z) == pytest.approx(ref / math.gamma(mu), rel=1e-10)


def test_rl_oracle_mu_one_is_plain_integral():
    assert gauss_jacobi_rl_oracle(1.0, 2.5, 0.1, 0.6, 0.9) == pytest.approx((0.6 ** 3.5 - 0.1 ** 3.5) / 3.5, rel=1e-13)


def test_rl_domain():
    with pytest.raises(ValueError):
        rl_integral_monomial(0.0, 1.0, 0.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        rl_integral_monomial(0.5, -1.0, 0.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        rl_integral_monomial(0.5, 1.0, 0.6, 0.4, 0.5)
    with pytest.raises(ValueError):
        rl_integral_monomial(0.5, 1.0, 0.0, 1.0, 1.5)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, 1.0), st.floats(0.0, 6.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_rl_additivity(mu, p, x, y, z):
    a, b = sorted((x, y))
    if b - a < 1e-3:
        return
    c = a + 0.37 * (b - a)
    whole = rl_integral_monomial(mu, p, a, b, z)
    parts = rl_integral_monomial(mu, p, a, c, z) + rl_integral_monomial(mu, p, c, b, z)
    assert parts == pytest.approx(whole, rel=1e-10, abs=1e-300)


def test_rl_monotone_in_zeta():
    # nondecreasing while zeta is inside the block; past b the kernel (zeta - s)^(mu - 1)
    # shrinks for mu < 1 and the integral decays, for mu = 1 it stays constant
    for mu, p, a, b in [(0.3, 0.0, 0.0, 0.4), (0.9, 2.7, 0.2, 0.6), (0.5, 1.0, 0.5, 1.0), (1.0, 2.0, 0.1, 0.3)]:
        z = np.linspace(0, b, 400)
        assert np.all(np.diff(rl_integral_monomial(mu, p, a, b, z)) >= -1e-15)
        tail = rl_integral_monomial(mu, p, a, b, np.linspace(b, 1, 50))
        assert np.all(np.diff(tail) <= 1e-15)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, 1.0), st.integers(0, 6), st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_shifted_matches_binomial_expansion(mu, j, x, y, z):
    a, b = sorted((x, y))
    if b - a < 1e-3:
        return
    # (s - a)^j = sum_q C(j, q) (-a)^(j-q) s^q
    ref = sum(math.comb(j, q) * (-a) ** (j - q) * rl_integral_monomial(mu, float(q), a, b, z) for q in range(j + 1))
    got = rl_integral_shifted(mu, j, a, b, z)
    assert got == pytest.approx(ref, rel=1e-8, abs=1e-12)
