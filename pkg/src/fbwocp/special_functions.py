"""Bernoulli numbers/polynomials, Gamma and the regularized incomplete beta."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

MAX_BERNOULLI = 128


@lru_cache(maxsize=None)
def _bernoulli_table(N: int) -> tuple[Fraction, ...]:
    B = [Fraction(1)]
    for n in range(1, N + 1):
        # sum_{j=0}^{n} C(n+1, j) B_j = 0
        s = sum(math.comb(n + 1, j) * B[j] for j in range(n))
        B.append(-s / (n + 1))
    return tuple(B)


def bernoulli_numbers(N: int) -> list[Fraction]:
    """Exact Bernoulli numbers B_0..B_N with the B_1 = -1/2 convention."""
    if N < 0:
        raise ValueError(f"N must be nonnegative, got {N}")
    if N > MAX_BERNOULLI:
        raise ValueError(f"N={N} exceeds supported maximum {MAX_BERNOULLI}")
    return list(_bernoulli_table(N))


def bernoulli_number(j: int) -> Fraction:
    return bernoulli_numbers(max(j, 64))[j]


@lru_cache(maxsize=None)
def bernoulli_coefficients(m: int) -> np.ndarray:
    """Monomial coefficients of B_m(x), lowest degree first."""
    return np.array([float(math.comb(m, j) * bernoulli_number(m - j)) for j in range(m + 1)])


def bernoulli_polynomial(m: int, x):
    """B_m(x) = sum_j C(m, j) B_{m-j} x^j (Horner evaluation)."""
    if m < 0:
        raise ValueError(f"degree must be nonnegative, got {m}")
    c = bernoulli_coefficients(m)
    x = np.asarray(x, dtype=float)
    out = np.full_like(x, c[-1])
    for coef in c[-2::-1]:
        out = out * x + coef
    return out if out.ndim else float(out)


@lru_cache(maxsize=None)
def normality_coefficient(m: int) -> float:
    """Upsilon_m = sqrt((-1)^{m-1} (m!)^2 / (2m)! * B_{2m}); only defined for m >= 1."""
    if m < 1:
        raise ValueError("normality coefficient is defined for m >= 1")
    radicand = (-1) ** (m - 1) * Fraction(math.factorial(m) ** 2, math.factorial(2 * m)) * bernoulli_number(2 * m)
    if radicand <= 0:
        raise ArithmeticError(f"nonpositive radicand {radicand} for m={m}: Bernoulli table is corrupt")
    return math.sqrt(radicand)


def normalized_bernoulli(m: int, x):
    if m == 0:
        x = np.asarray(x, dtype=float)
        out = np.ones_like(x)
        return out if out.ndim else 1.0
    return bernoulli_polynomial(m, x) / normality_coefficient(m)


def gamma_fn(x: float) -> float:
    if x <= 0:
        raise ValueError(f"gamma_fn is restricted to x > 0, got {x}")
    return math.gamma(x)


def _beta_cf(a, b, x, max_iter=300, eps=1e-16):
    # modified Lentz evaluation of the incomplete-beta continued fraction, vectorized
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    d = np.where(np.abs(d) < tiny, tiny, d)
    d = 1.0 / d
    h = d.copy()
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < tiny, tiny, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < tiny, tiny, c)
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < tiny, tiny, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < tiny, tiny, c)
        d = 1.0 / d
        delta = d * c
        h *= delta
        if np.all(np.abs(delta - 1.0) < eps):
            break
    return h


def regularized_incomplete_beta(a: float, b: float, x):
    """I_x(a, b) by continued fraction, using I_x(a,b) = 1 - I_{1-x}(b,a) past the mean."""
    if a <= 0 or b <= 0:
        raise ValueError(f"a and b must be positive, got a={a}, b={b}")
    x = np.asarray(x, dtype=float)
    if np.any((x < 0) | (x > 1)) or np.any(np.isnan(x)):
        raise ValueError("x must lie in [0, 1]")
    out = np.zeros_like(x)
    out[x == 1.0] = 1.0
    inner = (x > 0) & (x < 1)
    if np.any(inner):
        xi = x[inner]
        lbeta = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        with np.errstate(divide="ignore"):
            front = np.exp(lbeta + a * np.log(xi) + b * np.log1p(-xi))
        direct = xi < (a + 1.0) / (a + b + 2.0)
        res = np.empty_like(xi)
        if np.any(direct):
            xd = xi[direct]
            res[direct] = front[direct] * _beta_cf(a, b, xd) / a
        if np.any(~direct):
            xs = xi[~direct]
            res[~direct] = 1.0 - front[~direct] * _beta_cf(b, a, 1.0 - xs) / b
        out[inner] = np.clip(res, 0.0, 1.0)
    return out if out.ndim else float(out)
