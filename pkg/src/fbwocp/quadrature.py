"""Definite integrals over [0, 1] and Riemann-Liouville integrals of monomials."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .special_functions import gamma_fn, regularized_incomplete_beta

DEFAULT_ORDER = 40
GRADING_LEVELS = 12
GRADING_RATIO = 0.15


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    order: int


@lru_cache(maxsize=None)
def _legendre_rule(Q: int) -> QuadratureRule:
    i = np.arange(1, Q + 1)
    x = np.cos(np.pi * (i - 0.25) / (Q + 0.5))
    for _ in range(100):
        p0, p1 = np.ones_like(x), x.copy()
        for j in range(2, Q + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        dp = Q * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    # recompute the derivative at the converged roots
    p0, p1 = np.ones_like(x), x.copy()
    for j in range(2, Q + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    dp = Q * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    x, w = x[order], w[order]
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadratureRule(x, w, Q)


def gauss_legendre(Q: int) -> QuadratureRule:
    """Q-point Gauss-Legendre rule on [-1, 1]; exact through degree 2Q - 1."""
    if not 1 <= Q <= 128:
        raise ValueError(f"quadrature order must lie in 1..128, got {Q}")
    return _legendre_rule(int(Q))


def _check_panels(panels) -> np.ndarray:
    p = np.asarray(panels, dtype=float)
    if p.ndim != 1 or p.size < 2 or p[0] != 0.0 or p[-1] != 1.0 or np.any(np.diff(p) <= 0):
        raise ValueError(f"panels must be strictly increasing from 0 to 1, got {panels!r}")
    return p


def panel_nodes(panels, Q: int = DEFAULT_ORDER) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes/weights over consecutive panels of [0, 1]."""
    p = _check_panels(panels)
    rule = gauss_legendre(Q)
    half = 0.5 * np.diff(p)[:, None]
    mid = 0.5 * (p[1:] + p[:-1])[:, None]
    return (mid + half * rule.nodes).ravel(), (half * rule.weights).ravel()


def graded_panels(panels, levels: int = GRADING_LEVELS, ratio: float = GRADING_RATIO) -> np.ndarray:
    """Refine each panel geometrically toward its left end, where zeta^mu and
    (zeta - lo)^mu behaviour sits."""
    p = _check_panels(panels)
    pts = [0.0]
    for a, b in zip(p[:-1], p[1:]):
        inner = a + (b - a) * ratio ** np.arange(levels, 0, -1)
        pts.extend(inner.tolist())
        pts.append(b)
    return np.array(pts)


def integrate_piecewise(f, panels, Q: int = DEFAULT_ORDER) -> float:
    z, w = panel_nodes(panels, Q)
    return float(np.dot(w, f(z)))


def rl_integral_monomial(mu: float, p: float, a: float, b: float, zeta):
    """Order-mu Riemann-Liouville integral of s^p restricted to [a, b), evaluated at zeta."""
    if not 0.0 < mu <= 1.0:
        raise ValueError(f"mu must lie in (0, 1], got {mu}")
    if p < 0:
        raise ValueError(f"exponent must be nonnegative, got {p}")
    if not 0.0 <= a < b <= 1.0:
        raise ValueError(f"need 0 <= a < b <= 1, got a={a}, b={b}")
    z = np.asarray(zeta, dtype=float)
    if np.any((z < 0) | (z > 1)):
        raise ValueError("zeta must lie in [0, 1]")
    out = np.zeros_like(z)
    live = z > a
    if np.any(live):
        zl = z[live]
        upper = regularized_incomplete_beta(p + 1.0, mu, np.minimum(1.0, b / zl))
        lower = regularized_incomplete_beta(p + 1.0, mu, a / zl)
        scale = math.exp(math.lgamma(p + 1.0) - math.lgamma(p + 1.0 + mu))
        out[live] = scale * zl ** (p + mu) * (upper - lower)
    return out if out.ndim else float(out)


def rl_integral_shifted(mu: float, j: int, a: float, b: float, zeta):
    """Order-mu Riemann-Liouville integral of (s - a)^j restricted to [a, b), evaluated at zeta.

    Same closed form as the monomial case after translating the origin to a; avoids the
    cancellation of expanding (s - a)^j into powers of s on blocks far from zero.
    """
    if not 0.0 < mu <= 1.0:
        raise ValueError(f"mu must lie in (0, 1], got {mu}")
    if j < 0:
        raise ValueError(f"exponent must be nonnegative, got {j}")
    if not 0.0 <= a < b <= 1.0:
        raise ValueError(f"need 0 <= a < b <= 1, got a={a}, b={b}")
    z = np.asarray(zeta, dtype=float)
    if np.any((z < 0) | (z > 1)):
        raise ValueError("zeta must lie in [0, 1]")
    out = np.zeros_like(z)
    live = z > a
    if np.any(live):
        x = z[live] - a
        upper = regularized_incomplete_beta(j + 1.0, mu, np.minimum(1.0, (b - a) / x))
        scale = math.exp(math.lgamma(j + 1.0) - math.lgamma(j + 1.0 + mu))
        out[live] = scale * x ** (j + mu) * upper
    return out if out.ndim else float(out)


@lru_cache(maxsize=256)
def _jacobi_roots(Q: int, alpha: float, beta: float):
    return roots_jacobi(Q, alpha, beta)


def _jacobi_tail(mu, p, x, zeta, Q):
    # int_x^zeta (zeta - s)^{mu-1} s^p ds, singular endpoint handled by the Jacobi weight
    L = zeta - x
    if L <= 0:
        return 0.0
    if x == 0.0:
        s, w = _jacobi_roots(Q, mu - 1.0, p)
        return (L / 2) ** (mu + p) * float(np.sum(w))
    s, w = _jacobi_roots(Q, mu - 1.0, 0.0)
    nodes = x + L * (1.0 + s) / 2
    return (L / 2) ** mu * float(np.dot(w, nodes ** p))


def gauss_jacobi_rl_oracle(mu: float, p: float, a: float, b: float, zeta: float, Q: int = 200) -> float:
    """Independent check of ``rl_integral_monomial`` by Gauss-Jacobi quadrature."""
    if not 0.0 < mu <= 1.0 or p < 0 or not 0.0 <= a < b <= 1.0 or not 0.0 <= zeta <= 1.0:
        raise ValueError("arguments outside the supported domain")
    if zeta <= a:
        return 0.0
    if zeta > b and zeta - b >= 0.25 * (b - a):
        # kernel is analytic on [a, b]; integrating it directly avoids cancelling two tails
        h = (b - a) / 2
        if a == 0.0:
            s, w = _jacobi_roots(Q, 0.0, p)
            nodes = h * (1.0 + s)
            total = h ** (p + 1) * float(np.dot(w, (zeta - nodes) ** (mu - 1.0)))
        else:
            s, w = _jacobi_roots(Q, 0.0, 0.0)
            nodes = a + h * (1.0 + s)
            total = h * float(np.dot(w, (zeta - nodes) ** (mu - 1.0) * nodes ** p))
        return total / gamma_fn(mu)
    total = _jacobi_tail(mu, p, a, zeta, Q)
    if zeta > b:
        total -= _jacobi_tail(mu, p, b, zeta, Q)
    return total / gamma_fn(mu)
