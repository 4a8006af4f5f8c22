from __future__ import annotations

import math

import numpy as np
import pytest

from fbwocp.basis import BasisSpec, eval_vector, flat_index
from fbwocp.operational import (
    GramMatrix,
    IllConditionedGramError,
    basis_moments,
    dual_matrix,
    dump_csv,
    gram_tensor,
    integration_matrix,
    product_matrix,
    project,
    reconstruct,
)
from fbwocp.special_functions import bernoulli_numbers, normality_coefficient
from fbwocp.validation import direct_product_matrix

GRID = np.linspace(0, 1, 201)


@pytest.mark.parametrize("k,M", [(1, 3), (2, 3), (3, 3), (2, 2)])
def test_dual_identity_at_mu_one(k, M):
    D = dual_matrix(BasisSpec(k, M, 1.0)).entries
    np.testing.assert_allclose(D, np.eye(D.shape[0]), atol=1e-10)


def test_dual_mu_one_beyond_degree_two():
    # degrees 1 and 3 overlap: int B~_1 B~_3 = -(1/120) / (Upsilon_1 Upsilon_3)
    D = dual_matrix(BasisSpec(1, 4, 1.0)).entries
    B4 = float(bernoulli_numbers(4)[4])
    expected = (1 * 6 / 24) * B4 / (normality_coefficient(1) * normality_coefficient(3))
    assert D[1, 3] == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(-math.sqrt(12 * 840) / 120)
    np.testing.assert_allclose(np.diag(D), 1.0, atol=1e-12)


def test_dual_printed_entries():
    D = dual_matrix(BasisSpec(2, 3, 0.9)).entries
    assert D[0, 0] == pytest.approx(0.925875, abs=2e-5)
    assert D[0, 1] == pytest.approx(0.0844033, abs=2e-5)
    assert D[0, 2] == pytest.approx(-0.0311326, abs=2e-5)
    assert D[3, 3] == pytest.approx(1.07413, abs=2e-5)


@pytest.mark.parametrize("spec", [BasisSpec(2, 3, 0.9), BasisSpec(3, 4, 0.55), BasisSpec(1, 5, 0.3)])
def test_dual_structure(spec):
    D = dual_matrix(spec).entries
    assert np.abs(D - D.T).max() < 1e-12
    mask = np.kron(np.eye(spec.n_blocks), np.ones((spec.M, spec.M))) == 0
    assert np.abs(D[mask]).max(initial=0.0) < 1e-12
    assert np.linalg.eigvalsh(D).min() > 0


def test_gram_conditioning_guard():
    with pytest.raises(IllConditionedGramError):
        GramMatrix(np.diag([1.0, 1e-14]), BasisSpec(1, 2))


def test_project_basis_element():
    spec = BasisSpec(2, 3, 0.8)
    c = project(lambda z: eval_vector(z, spec)[3], spec)
    np.testing.assert_allclose(c, np.eye(6)[3], atol=1e-12)


@pytest.mark.parametrize("mu", [0.3, 0.75, 1.0])
def test_project_power_in_span(mu):
    spec = BasisSpec(1, 2, mu)
    c = project(lambda z: z ** mu, spec)
    np.testing.assert_allclose(reconstruct(c, GRID, spec), GRID ** mu, atol=1e-10)


def test_project_exponential():
    spec = BasisSpec(3, 7, 1.0)
    c = project(lambda z: np.exp(-2 * z), spec)
    assert np.abs(reconstruct(c, GRID, spec) - np.exp(-2 * GRID)).max() < 1e-6


def test_projection_idempotent():
    spec = BasisSpec(2, 4, 0.6)
    c = np.random.default_rng(0).standard_normal(spec.m_hat)
    np.testing.assert_allclose(project(lambda z: reconstruct(c, z, spec), spec), c, atol=1e-10)


def test_gram_tensor_examples():
    assert gram_tensor(BasisSpec(1, 1, 1.0)).dense()[0, 0, 0] == pytest.approx(1.0, abs=1e-14)
    assert gram_tensor(BasisSpec(2, 1, 1.0)).dense()[0, 0, 0] == pytest.approx(math.sqrt(2), abs=1e-14)


def test_gram_tensor_symmetry_and_sparsity():
    spec = BasisSpec(2, 3, 0.7)
    E = gram_tensor(spec).dense()
    for perm in [(1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0)]:
        np.testing.assert_allclose(E, E.transpose(perm), atol=1e-12)
    assert np.all(E[:3, 3:, :] == 0) and np.all(E[3:, :3, :] == 0)


def test_gram_tensor_contract_matches_dense():
    spec = BasisSpec(3, 2, 0.8)
    E3 = gram_tensor(spec)
    c = np.arange(spec.m_hat, dtype=float)
    np.testing.assert_allclose(E3.contract(c), np.einsum("j,ijl->il", c, E3.dense()), atol=1e-13)


def test_product_matrix_linear():
    spec = BasisSpec(2, 3, 0.9)
    E3, D = gram_tensor(spec), dual_matrix(spec)
    rng = np.random.default_rng(1)
    c1, c2 = rng.standard_normal((2, spec.m_hat))
    assert np.all(product_matrix(np.zeros(spec.m_hat), E3, D) == 0)
    lhs = product_matrix(2.0 * c1 - 3.0 * c2, E3, D)
    rhs = 2.0 * product_matrix(c1, E3, D) - 3.0 * product_matrix(c2, E3, D)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)
    with pytest.raises(ValueError):
        product_matrix(np.ones(3), E3, D)


@pytest.mark.parametrize("mu", [0.9, 1.0])
def test_product_matrix_against_direct(mu):
    spec = BasisSpec(2, 3, mu)
    E3, D = gram_tensor(spec), dual_matrix(spec)
    c = np.random.default_rng(2).standard_normal(spec.m_hat)
    np.testing.assert_allclose(product_matrix(c, E3, D), direct_product_matrix(c, spec), atol=1e-10)


def test_product_matrix_exact_for_products_in_span():
    # f = 1 + z, g = 2 - z on k = 1, M = 3: f g has degree 2 and lies in the span
    spec = BasisSpec(1, 3, 1.0)
    E3, D = gram_tensor(spec), dual_matrix(spec)
    f = project(lambda z: 1 + z, spec)
    g = project(lambda z: 2 - z, spec)
    fg = product_matrix(f, E3, D).T @ g
    np.testing.assert_allclose(fg, project(lambda z: (1 + z) * (2 - z), spec), atol=1e-9)


def test_moments():
    np.testing.assert_allclose(basis_moments(BasisSpec(1, 1)).v1, [1.0], atol=1e-14)
    r = 2 ** -0.5
    np.testing.assert_allclose(basis_moments(BasisSpec(2, 2, 1.0)).v1, [r, 0, r, 0], atol=1e-13)
    v = basis_moments(BasisSpec(3, 4, 1.0)).v1.reshape(4, 4)
    np.testing.assert_allclose(v[:, 0], 2 ** -1.0, atol=1e-12)
    np.testing.assert_allclose(v[:, 1:], 0, atol=1e-12)
    spec = BasisSpec(2, 3, 0.6)
    assert basis_moments(spec).v1 @ project(np.ones_like, spec) == pytest.approx(1.0, abs=1e-12)


def test_integration_matrix_block_causality():
    spec = BasisSpec(3, 3, 0.7)
    P = integration_matrix(spec).entries
    for n in range(1, spec.n_blocks + 1):
        for r in range(1, n):
            rows = slice(flat_index(n, 0, spec), flat_index(n, spec.M - 1, spec) + 1)
            cols = slice(flat_index(r, 0, spec), flat_index(r, spec.M - 1, spec) + 1)
            assert np.abs(P[rows, cols]).max() < 1e-10


def test_integration_matrix_mu_one_antiderivative():
    spec = BasisSpec(1, 2, 1.0)
    P = integration_matrix(spec).entries
    np.testing.assert_allclose(P[0] @ eval_vector(GRID, spec), GRID, atol=1e-10)
    # psi_1 = sqrt(3)(2z - 1) integrates to sqrt(3)(z^2 - z): mean -sqrt(3)/6, odd part zero
    np.testing.assert_allclose(P[1], [-math.sqrt(3) / 6, 0.0], atol=1e-12)


def test_integration_order_one_on_fractional_basis():
    # the ordinary integral of a single t-polynomial leaves the span, but its projection is consistent
    spec = BasisSpec(2, 3, 0.9)
    P1 = integration_matrix(spec, order=1.0).entries
    i = 4
    cum = np.array([np.trapezoid(eval_vector(np.linspace(0, z, 4001), spec)[i], np.linspace(0, z, 4001)) for z in GRID])
    ref = project(lambda z: np.interp(z, GRID, cum), spec)
    np.testing.assert_allclose(P1[i], ref, atol=1e-4)


@pytest.mark.parametrize("mu", [0.5, 0.9])
def test_integration_matrix_quadrature_converged(mu):
    spec = BasisSpec(2, 4, mu)
    np.testing.assert_allclose(integration_matrix(spec, 40).entries, integration_matrix(spec, 80).entries, atol=1e-10)


def test_order_validation():
    with pytest.raises(ValueError):
        integration_matrix(BasisSpec(2, 2, 0.9), order=1.5)


def test_dump_csv(tmp_path):
    a = np.array([[1 / 3, -2e-17], [math.pi, 1.0]])
    dump_csv(a, tmp_path / "m.csv")
    back = np.loadtxt(tmp_path / "m.csv", delimiter=",")
    assert np.array_equal(a, back)
