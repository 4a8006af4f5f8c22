"""Invariant suite behind ``focp validate`` plus the independent oracles it relies on."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .basis import BasisSpec, eval_vector, monomial_expansion, support
from .operational import dual_matrix, gram_tensor, integration_matrix, product_matrix
from .quadrature import gauss_jacobi_rl_oracle, rl_integral_monomial
from .special_functions import bernoulli_numbers

PRINTED_D09 = np.array([
    [0.925875, 0.0844033, -0.0311326],
    [0.0844033, 0.898029, 0.0903579],
    [-0.0311326, 0.0903579, 0.896687],
    [1.07413, 0.0234615, -0.00184153],
    [0.0234615, 1.07248, 0.0211615],
    [-0.00184153, 0.0211615, 1.07293],
])

PRINTED_P09 = np.array([
    [0.197148, 0.122578, 0.416644, 6.13304e-12],
    [-0.0998925, 0.0111862, 0.038012, 5.59535e-13],
    [0.0, 0.0, 0.238628, 0.139667],
    [0.0, 0.0, -0.134174, 0.00305066],
])

KNOWN_BERNOULLI = {0: Fraction(1), 1: Fraction(-1, 2), 2: Fraction(1, 6), 4: Fraction(-1, 30),
                   6: Fraction(1, 42), 8: Fraction(-1, 30), 10: Fraction(5, 66), 12: Fraction(-691, 2730)}


def t_space_rule(spec: BasisSpec, Q: int = 60, levels: int = 0, ratio: float = 0.2) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [0, 1] exact for integrands polynomial in t = zeta^mu on each block.

    Substituting zeta = t^(1/mu) leaves the Jacobian t^(1/mu - 1)/mu; next to t = 0 it is
    absorbed into a Gauss-Jacobi weight, elsewhere it is smooth and Gauss-Legendre suffices.
    ``levels`` > 0 grades every block geometrically toward its left end, for integrands
    with a (t - t_lo)^mu type kink there.
    """
    mu, K = spec.mu, spec.n_blocks
    beta = 1.0 / mu - 1.0
    xj, wj = roots_jacobi(Q, 0.0, beta)
    xl, wl = roots_legendre(Q)
    h = 1.0 / K
    nodes, weights = [], []
    for n in range(1, K + 1):
        t0 = (n - 1) * h
        cuts = [t0] + [t0 + h * ratio ** e for e in range(levels, 0, -1)] + [t0 + h]
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            half = (hi - lo) / 2
            if lo == 0.0:
                nodes.append(half * (1 + xj))
                weights.append(wj * half ** (beta + 1) / mu)
            else:
                t = lo + half * (1 + xl)
                nodes.append(t)
                weights.append(wl * half * t ** beta / mu)
    t = np.concatenate(nodes)
    return np.clip(t ** (1.0 / mu), 0.0, 1.0), np.concatenate(weights)


def direct_product_matrix(c: np.ndarray, spec: BasisSpec, Q: int = 60) -> np.ndarray:
    """C~ from int (c^T Psi) Psi Psi^T dzeta = C~ D by brute-force triple products."""
    z, w = t_space_rule(spec, Q)
    psi = eval_vector(z, spec)
    y = np.asarray(c) @ psi
    S = (psi * (w * y)) @ psi.T
    D = (psi * w) @ psi.T
    return np.linalg.solve(D.T, S.T).T


def rl_of_wavelet(i: int, spec: BasisSpec, zeta, order: float | None = None) -> np.ndarray:
    """I^order psi_i at the points zeta, from the monomial expansion and the Gauss-Jacobi oracle."""
    order = spec.mu if order is None else order
    n, m = divmod(i, spec.M)
    n += 1
    lo, hi = support(n, spec)
    w = monomial_expansion(n, m, spec)
    z = np.atleast_1d(np.asarray(zeta, dtype=float))
    out = np.zeros_like(z)
    for q, wq in enumerate(w):
        out += wq * np.array([gauss_jacobi_rl_oracle(order, spec.mu * q, lo, hi, zz) for zz in z])
    return out


def integration_fidelity(spec: BasisSpec, Q: int = 30, order: float | None = None) -> np.ndarray:
    """Per-row D-norm distance between P rows and independently projected I^mu psi_i."""
    z, w = t_space_rule(spec, Q, levels=8)
    psi = eval_vector(z, spec)
    D = (psi * w) @ psi.T
    P = integration_matrix(spec, order=order).entries
    errs = np.empty(spec.m_hat)
    for i in range(spec.m_hat):
        ref = np.linalg.solve(D, psi @ (w * rl_of_wavelet(i, spec, z, order)))
        d = P[i] - ref
        errs[i] = math.sqrt(max(d @ D @ d, 0.0))
    return errs


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check(name: str, err: float, tol: float) -> CheckResult:
    return CheckResult(name, bool(err < tol), f"max error {err:.3e} (tol {tol:g})")


def check_bernoulli() -> CheckResult:
    B = bernoulli_numbers(12)
    err = max(abs(float(B[j] - v)) for j, v in KNOWN_BERNOULLI.items())
    return _check("bernoulli_numbers", err, 1e-15)


def check_identity_gram() -> CheckResult:
    D = dual_matrix(BasisSpec(2, 3, 1.0)).entries
    return _check("dual_matrix_mu1_identity", float(np.abs(D - np.eye(6)).max()), 1e-10)


def check_printed_dual() -> CheckResult:
    D = dual_matrix(BasisSpec(2, 3, 0.9)).entries
    diag = np.vstack([D[:3, :3], D[3:, 3:]])
    cross = max(np.abs(D[:3, 3:]).max(), np.abs(D[3:, :3]).max())
    err = float(np.abs(diag - PRINTED_D09).max())
    res = _check("printed_dual_matrix_0.9", err, 2e-5)
    if cross >= 1e-8:
        return CheckResult(res.name, False, f"cross-block entry {cross:.3e}")
    return res


def check_printed_integration() -> CheckResult:
    P = integration_matrix(BasisSpec(2, 2, 0.9)).entries
    return _check("printed_integration_matrix_0.9", float(np.abs(P - PRINTED_P09).max()), 1e-4)


def check_rl_oracle(n: int = 60, seed: int = 7) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        mu = rng.uniform(0.1, 1.0)
        p = rng.uniform(0.0, 6.0)
        a, b = np.sort(rng.uniform(0.0, 1.0, 2))
        a = 0.0 if rng.random() < 0.3 else a
        z = rng.uniform(a, 1.0)
        ref = gauss_jacobi_rl_oracle(mu, p, a, b, z)
        got = rl_integral_monomial(mu, p, a, b, z)
        if abs(ref) > 1e-300:
            worst = max(worst, abs(got - ref) / abs(ref))
    return _check("rl_closed_form_vs_gauss_jacobi", worst, 1e-8)


def check_product_matrix(seed: int = 11) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for mu in (0.9, 1.0):
        spec = BasisSpec(2, 3, mu)
        E3, D = gram_tensor(spec), dual_matrix(spec)
        for _ in range(3):
            c = rng.standard_normal(spec.m_hat)
            worst = max(worst, float(np.abs(product_matrix(c, E3, D) - direct_product_matrix(c, spec)).max()))
    return _check("product_matrix_vs_direct_quadrature", worst, 1e-10)


CHECKS: tuple[Callable[[], CheckResult], ...] = (
    check_bernoulli,
    check_identity_gram,
    check_printed_dual,
    check_printed_integration,
    check_rl_oracle,
    check_product_matrix,
)


def run_checks() -> list[CheckResult]:
    out = []
    for fn in CHECKS:
        try:
            out.append(fn())
        except Exception as exc:  # a crash is a failed invariant, not a crashed suite
            out.append(CheckResult(fn.__name__.removeprefix("check_"), False, f"{type(exc).__name__}: {exc}"))
    return out
