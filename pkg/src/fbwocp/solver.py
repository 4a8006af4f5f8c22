"""Linear-quadratic fractional optimal control with two states and one control.

Dynamics, for i = 1, 2::

    sum_j alpha[i, j] D^mu x_j = sum_j beta[i, j] x_j + gamma[i] u + f_i(zeta),   x(0) = x0

Cost::

    J = 1/2 int_0^1 a x_1^2 + b x_2^2 + c u^2 dzeta

The Caputo derivatives and the control are expanded in the wavelet basis, states are recovered
through the integration operational matrix, the dynamics are matched coefficient-wise and the
resulting equality-constrained quadratic program is solved through its KKT system.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.linalg import lu_factor, lu_solve

from .basis import BasisSpec, eval_vector
from .operational import (
    BasisMoments,
    GramMatrix,
    GramTensor,
    IntegrationMatrix,
    basis_moments,
    dual_matrix,
    gram_tensor,
    integration_matrix,
    product_matrix,
    project,
)
from .quadrature import DEFAULT_ORDER

log = logging.getLogger(__name__)

METHODS = ("fbw", "obw")


class SingularKKTError(np.linalg.LinAlgError):
    pass


class ToleranceError(ArithmeticError):
    pass


def _poly(coeffs) -> np.ndarray:
    c = np.atleast_1d(np.asarray(coeffs, dtype=float))
    if c.ndim != 1 or c.size == 0:
        raise ValueError(f"polynomial coefficients must be a nonempty list, got {coeffs!r}")
    return c


@dataclass(frozen=True)
class FocpProblem:
    """Problem data. Polynomials are coefficient lists, lowest degree first."""

    weight_a: np.ndarray
    weight_b: np.ndarray
    weight_c: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    forcing: tuple[np.ndarray, np.ndarray]
    x0: np.ndarray
    name: str = ""

    def __post_init__(self):
        for key in ("weight_a", "weight_b", "weight_c"):
            object.__setattr__(self, key, _poly(getattr(self, key)))
        alpha = np.asarray(self.alpha, dtype=float)
        beta = np.asarray(self.beta, dtype=float)
        gamma = np.asarray(self.gamma, dtype=float)
        x0 = np.asarray(self.x0, dtype=float)
        if alpha.shape != (2, 2) or beta.shape != (2, 2):
            raise ValueError("alpha and beta must be 2x2")
        if gamma.shape != (2,) or x0.shape != (2,):
            raise ValueError("gamma and x0 must have length 2")
        if abs(np.linalg.det(alpha)) < 1e-12:
            raise ValueError("alpha is singular: the dynamics do not determine D^mu x")
        if len(self.forcing) != 2:
            raise ValueError("forcing needs one polynomial per state equation")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "forcing", tuple(_poly(f) for f in self.forcing))

    def weight(self, which: str, zeta):
        return npoly.polyval(zeta, {"a": self.weight_a, "b": self.weight_b, "c": self.weight_c}[which])

    def force(self, i: int, zeta):
        return npoly.polyval(zeta, self.forcing[i])


@dataclass(frozen=True)
class Discretization:
    """Everything the solver needs for one basis: D, E3, moments and P."""

    spec: BasisSpec
    method: str
    order: float
    D: GramMatrix
    E3: GramTensor
    moments: BasisMoments
    P: IntegrationMatrix
    quad_order: int

    @property
    def m_hat(self) -> int:
        return self.spec.m_hat

    def project(self, f) -> np.ndarray:
        return project(f, self.spec, self.quad_order)

    def psi(self, zeta) -> np.ndarray:
        return eval_vector(zeta, self.spec)


def discretize(spec: BasisSpec, method: str = "fbw", quad_order: int = DEFAULT_ORDER) -> Discretization:
    """``fbw`` builds the basis at ``spec.mu``; ``obw`` keeps the mu = 1 basis and only the
    integration operator carries the fractional order."""
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    basis = spec if method == "fbw" else spec.with_mu(1.0)
    return Discretization(
        spec=basis,
        method=method,
        order=spec.mu,
        D=dual_matrix(basis, quad_order),
        E3=gram_tensor(basis, quad_order),
        moments=basis_moments(basis, quad_order),
        P=integration_matrix(basis, quad_order, order=spec.mu),
        quad_order=quad_order,
    )


def state_coefficients(c: np.ndarray, x0_component: float, disc: Discretization) -> np.ndarray:
    """Coefficients of x = I^mu(c^T Psi) + x(0), i.e. P^T c + project(x(0))."""
    d = disc.project(lambda z: np.full_like(z, x0_component))
    return disc.P.entries.T @ np.asarray(c, dtype=float) + d


def cost_term_chain(coeffs: np.ndarray, weight_coeffs: np.ndarray, disc: Discretization) -> float:
    """int w y^2 through two product-matrix approximations, y = coeffs^T Psi, w = weight_coeffs^T Psi."""
    E3, D, v1 = disc.E3, disc.D, disc.moments.v1
    first = product_matrix(coeffs, E3, D)          # Psi Psi^T y ~ first Psi
    square = first.T @ coeffs                      # y^2 ~ square^T Psi
    second = product_matrix(square, E3, D)
    weighted = second.T @ weight_coeffs            # w y^2 ~ weighted^T Psi
    return float(weighted @ v1)


def _quadratic_form(weight_coeffs: np.ndarray, disc: Discretization) -> np.ndarray:
    # cost_term_chain(c) = c^T Q c with Q = sum_l y_l E3[:, :, l],
    # y = D^{-1} w, w_j = sum_{i,l} A_i E3[i, j, l] e_l, e = D^{-1} v1
    e = disc.D.solve(disc.moments.v1)
    w = disc.E3.contract(weight_coeffs) @ e
    y = disc.D.solve(w)
    Q = disc.E3.weighted_slices(y)
    return 0.5 * (Q + Q.T)


def cost_quadratic_forms(problem: FocpProblem, disc: Discretization) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Symmetric Q_a, Q_b, Q_c with J = 1/2 (x1c^T Q_a x1c + x2c^T Q_b x2c + u^T Q_c u)."""
    return tuple(
        _quadratic_form(disc.project(lambda z, key=key: problem.weight(key, z)), disc)
        for key in ("a", "b", "c")
    )


def assemble_constraints(problem: FocpProblem, disc: Discretization) -> tuple[np.ndarray, np.ndarray]:
    """Coefficient-matched dynamics A z = r for z = (c1, c2, u)."""
    mh = disc.m_hat
    PT = disc.P.entries.T
    eye = np.eye(mh)
    d = [disc.project(lambda z, v=v: np.full_like(z, v)) for v in problem.x0]
    A = np.zeros((2 * mh, 3 * mh))
    r = np.zeros(2 * mh)
    for i in range(2):
        rows = slice(i * mh, (i + 1) * mh)
        for j in range(2):
            A[rows, j * mh:(j + 1) * mh] = problem.alpha[i, j] * eye - problem.beta[i, j] * PT
        A[rows, 2 * mh:] = -problem.gamma[i] * eye
        forcing = disc.project(lambda z, i=i: problem.force(i, z))
        r[rows] = forcing + problem.beta[i, 0] * d[0] + problem.beta[i, 1] * d[1]
    return A, r


@dataclass
class FocpSolution:
    c1: np.ndarray
    c2: np.ndarray
    u: np.ndarray
    eta: np.ndarray
    lam: np.ndarray
    cost: float
    kkt_residual: float
    feasibility_residual: float
    disc: Discretization = field(repr=False)
    x1_coeffs: np.ndarray = field(repr=False, default=None)
    x2_coeffs: np.ndarray = field(repr=False, default=None)

    @property
    def z(self) -> np.ndarray:
        return np.concatenate([self.c1, self.c2, self.u])


@dataclass(frozen=True)
class KKTSystem:
    """Quadratic program min 1/2 z^T H z + g^T z + const s.t. A z = r."""

    H: np.ndarray
    g: np.ndarray
    const: float
    A: np.ndarray
    r: np.ndarray

    def objective(self, z: np.ndarray) -> float:
        return float(0.5 * z @ self.H @ z + self.g @ z + self.const)

    def matrix(self) -> np.ndarray:
        n, m = self.H.shape[0], self.A.shape[0]
        return np.block([[self.H, self.A.T], [self.A, np.zeros((m, m))]])

    def rhs(self) -> np.ndarray:
        return np.concatenate([-self.g, self.r])


def build_kkt(problem: FocpProblem, disc: Discretization) -> KKTSystem:
    mh = disc.m_hat
    P = disc.P.entries
    Qa, Qb, Qc = cost_quadratic_forms(problem, disc)
    d1, d2 = (disc.project(lambda z, v=v: np.full_like(z, v)) for v in problem.x0)
    H = np.zeros((3 * mh, 3 * mh))
    H[:mh, :mh] = P @ Qa @ P.T
    H[mh:2 * mh, mh:2 * mh] = P @ Qb @ P.T
    H[2 * mh:, 2 * mh:] = Qc
    g = np.concatenate([P @ Qa @ d1, P @ Qb @ d2, np.zeros(mh)])
    const = 0.5 * (d1 @ Qa @ d1 + d2 @ Qb @ d2)
    A, r = assemble_constraints(problem, disc)
    return KKTSystem(H, g, const, A, r)


def chain_cost(problem: FocpProblem, disc: Discretization, c1, c2, u) -> float:
    """Cost evaluated literally through the product-matrix chain."""
    d1, d2 = (disc.project(lambda z, v=v: np.full_like(z, v)) for v in problem.x0)
    P = disc.P.entries
    x1 = P.T @ c1 + d1
    x2 = P.T @ c2 + d2
    A, B, C = (disc.project(lambda z, key=key: problem.weight(key, z)) for key in ("a", "b", "c"))
    return 0.5 * (cost_term_chain(x1, A, disc) + cost_term_chain(x2, B, disc) + cost_term_chain(np.asarray(u), C, disc))


def solve_kkt(
    problem: FocpProblem,
    spec: BasisSpec,
    method: str = "fbw",
    quad_order: int = DEFAULT_ORDER,
    tol: float = 1e-9,
) -> FocpSolution:
    disc = discretize(spec, method, quad_order)
    mh = disc.m_hat
    kkt = build_kkt(problem, disc)
    K, rhs = kkt.matrix(), kkt.rhs()
    cond = np.linalg.cond(K)
    if not np.isfinite(cond) or cond > 1e14:
        raise SingularKKTError(
            f"KKT matrix for {spec} ({method}) is singular (cond={cond:.3g}): "
            "redundant constraints or a Hessian that is only semidefinite on the constraint null space"
        )
    lu = lu_factor(K)
    sol = lu_solve(lu, rhs)
    res = rhs - K @ sol
    if np.max(np.abs(res)) > 1e-10:
        sol = sol + lu_solve(lu, res)
        res = rhs - K @ sol
    kkt_res = float(np.max(np.abs(res)))
    z = sol[:3 * mh]
    c1, c2, u = z[:mh], z[mh:2 * mh], z[2 * mh:]
    feas = float(np.max(np.abs(kkt.A @ z - kkt.r)))
    if max(kkt_res, feas) > tol:
        raise ToleranceError(f"KKT residual {kkt_res:.3g} / feasibility {feas:.3g} exceed {tol:g}")
    cost = chain_cost(problem, disc, c1, c2, u)
    log.debug("solved %s %s: J=%.9g kkt=%.2g", spec, method, cost, kkt_res)
    return FocpSolution(
        c1=c1,
        c2=c2,
        u=u,
        eta=sol[3 * mh:4 * mh],
        lam=sol[4 * mh:],
        cost=cost,
        kkt_residual=kkt_res,
        feasibility_residual=feas,
        disc=disc,
        x1_coeffs=state_coefficients(c1, problem.x0[0], disc),
        x2_coeffs=state_coefficients(c2, problem.x0[1], disc),
    )


def evaluate_solution(sol: FocpSolution, zeta) -> tuple:
    """(x1, x2, u) at zeta; scalars for scalar input, arrays otherwise."""
    psi = sol.disc.psi(zeta)
    return sol.x1_coeffs @ psi, sol.x2_coeffs @ psi, sol.u @ psi


def dynamics_residual(sol: FocpSolution, problem: FocpProblem, grid) -> float:
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    psi = sol.disc.psi(grid)
    deriv = np.stack([sol.c1 @ psi, sol.c2 @ psi])
    states = np.stack([sol.x1_coeffs @ psi, sol.x2_coeffs @ psi])
    u = sol.u @ psi
    worst = 0.0
    for i in range(2):
        lhs = problem.alpha[i] @ deriv
        rhs = problem.beta[i] @ states + problem.gamma[i] * u + problem.force(i, grid)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst
