"""Dual Gram matrix, basis moments, product and fractional-integration operational matrices."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .basis import BasisSpec, breakpoints, eval_vector, local_expansion, monomial_expansion, support
from .quadrature import DEFAULT_ORDER, graded_panels, panel_nodes, rl_integral_monomial, rl_integral_shifted

COND_LIMIT = 1e12


class IllConditionedGramError(ArithmeticError):
    pass


@dataclass(frozen=True)
class GramMatrix:
    entries: np.ndarray
    spec: BasisSpec

    def __post_init__(self):
        cond = np.linalg.cond(self.entries)
        if not np.isfinite(cond) or cond > COND_LIMIT:
            raise IllConditionedGramError(f"dual matrix for {self.spec} has condition number {cond:.3g}")
        object.__setattr__(self, "_factor", cho_factor(self.entries))

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """D^{-1} rhs via the cached Cholesky factor (D is symmetric)."""
        return cho_solve(self._factor, rhs)


@dataclass(frozen=True)
class BasisMoments:
    v1: np.ndarray
    spec: BasisSpec


@dataclass(frozen=True)
class GramTensor:
    """Triple products E3[i, j, l] = int psi_i psi_j psi_l, kept as one dense M^3 block per support."""

    blocks: tuple[np.ndarray, ...]
    spec: BasisSpec

    def dense(self) -> np.ndarray:
        M, mh = self.spec.M, self.spec.m_hat
        out = np.zeros((mh, mh, mh))
        for b, blk in enumerate(self.blocks):
            s = slice(b * M, (b + 1) * M)
            out[s, s, s] = blk
        return out

    def contract(self, c: np.ndarray) -> np.ndarray:
        """S(c)[i, l] = sum_j c_j E3[i, j, l]."""
        M = self.spec.M
        c = np.asarray(c, dtype=float)
        out = np.zeros((self.spec.m_hat, self.spec.m_hat))
        for b, blk in enumerate(self.blocks):
            s = slice(b * M, (b + 1) * M)
            out[s, s] = np.einsum("j,ijl->il", c[s], blk)
        return out

    def weighted_slices(self, y: np.ndarray) -> np.ndarray:
        """sum_l y_l E3[:, :, l]."""
        return self.contract(y)  # E3 is fully symmetric


@dataclass(frozen=True)
class IntegrationMatrix:
    """Row (n, m), column (r, l): coefficient of psi_{r,l} in I^order psi_{n,m}."""

    entries: np.ndarray
    spec: BasisSpec
    order: float


class _Context:
    def __init__(self, spec: BasisSpec, Q: int):
        self.spec, self.Q = spec, Q
        bp = breakpoints(spec)
        self.nodes, self.weights = panel_nodes(graded_panels(bp), Q)
        # every graded panel lies inside one block
        self.block = np.searchsorted(bp, self.nodes, side="right")
        self.psi = eval_vector(self.nodes, spec)
        self.gram = GramMatrix((self.psi * self.weights) @ self.psi.T, spec)

    def inner(self, values: np.ndarray) -> np.ndarray:
        """int f Psi for f sampled at the quadrature nodes."""
        return self.psi @ (self.weights * values)


@lru_cache(maxsize=64)
def _context(spec: BasisSpec, Q: int) -> _Context:
    return _Context(spec, Q)


def dual_matrix(spec: BasisSpec, Q: int = DEFAULT_ORDER) -> GramMatrix:
    return _context(spec, Q).gram


def basis_moments(spec: BasisSpec, Q: int = DEFAULT_ORDER) -> BasisMoments:
    ctx = _context(spec, Q)
    return BasisMoments(ctx.psi @ ctx.weights, spec)


def project(f, spec: BasisSpec, Q: int = DEFAULT_ORDER) -> np.ndarray:
    """Coefficients C with f ~ C^T Psi, from D C = int f Psi."""
    ctx = _context(spec, Q)
    return ctx.gram.solve(ctx.inner(np.broadcast_to(f(ctx.nodes), ctx.nodes.shape).astype(float)))


def reconstruct(coeffs: np.ndarray, zeta, spec: BasisSpec):
    return np.asarray(coeffs) @ eval_vector(zeta, spec)


def gram_tensor(spec: BasisSpec, Q: int = DEFAULT_ORDER) -> GramTensor:
    ctx = _context(spec, Q)
    M = spec.M
    blocks = []
    for b in range(spec.n_blocks):
        pts = ctx.block == b + 1
        P = ctx.psi[b * M:(b + 1) * M, pts]
        blocks.append(np.einsum("iq,jq,lq,q->ijl", P, P, P, ctx.weights[pts]))
    return GramTensor(tuple(blocks), spec)


def product_matrix(c: np.ndarray, E3: GramTensor, D: GramMatrix) -> np.ndarray:
    """Product operational matrix C~ with Psi Psi^T c ~ C~ Psi."""
    c = np.asarray(c, dtype=float)
    if c.shape != (E3.spec.m_hat,) or D.entries.shape != (E3.spec.m_hat,) * 2:
        raise ValueError(f"dimension mismatch: c{c.shape}, D{D.entries.shape}, m_hat={E3.spec.m_hat}")
    S = E3.contract(c)
    return D.solve(S.T).T


def integration_matrix(spec: BasisSpec, Q: int = DEFAULT_ORDER, order: float | None = None) -> IntegrationMatrix:
    """Fractional-integration operational matrix P with I^order Psi ~ P Psi.

    Each wavelet is expanded into monomials zeta^{mu q} on its block, each block-restricted
    monomial is integrated in closed form and projected back onto the basis. When the basis
    is polynomial in zeta (mu = 1) the monomials are centred at the block's left end.
    ``order`` defaults to ``spec.mu``; passing a different order builds the operator for that
    integration order over the basis geometry of ``spec``.
    """
    order = spec.mu if order is None else float(order)
    if not 0.0 < order <= 1.0:
        raise ValueError(f"integration order must lie in (0, 1], got {order}")
    ctx = _context(spec, Q)
    M, mh = spec.M, spec.m_hat
    P = np.zeros((mh, mh))
    for n in range(1, spec.n_blocks + 1):
        lo, hi = support(n, spec)
        # projected coefficients of g_{nq} = I^order(zeta^{mu q} chi_block), one row per q
        if spec.mu == 1.0:
            g = [rl_integral_shifted(order, q, lo, hi, ctx.nodes) for q in range(M)]
            expand = local_expansion
        else:
            g = [rl_integral_monomial(order, spec.mu * q, lo, hi, ctx.nodes) for q in range(M)]
            expand = monomial_expansion
        G = np.array([ctx.gram.solve(ctx.inner(v)) for v in g])
        for m in range(M):
            P[(n - 1) * M + m] = expand(n, m, spec) @ G[: m + 1]
    return IntegrationMatrix(P, spec, order)


def dump_csv(matrix, path) -> None:
    """Row-major CSV, 17 significant digits."""
    a = np.atleast_2d(np.asarray(matrix, dtype=float))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for row in a:
            w.writerow([f"{v:.17g}" for v in row])


def clear_caches() -> None:
    """Drop every memoized table so that changes to the Bernoulli data propagate."""
    from . import basis, special_functions

    special_functions._bernoulli_table.cache_clear()
    special_functions.bernoulli_coefficients.cache_clear()
    special_functions.normality_coefficient.cache_clear()
    basis.scale_factor.cache_clear()
    _context.cache_clear()
