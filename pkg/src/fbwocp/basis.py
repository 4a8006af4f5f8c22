"""Orthonormal (mu = 1) and fractional Bernoulli wavelets on [0, 1]."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .special_functions import bernoulli_coefficients, normality_coefficient


@dataclass(frozen=True)
class BasisSpec:
    """Wavelet family: resolution level ``k``, ``M`` polynomials per block, order ``mu``."""

    k: int
    M: int
    mu: float = 1.0
    m_hat: int = field(init=False)

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k}")
        if int(self.M) != self.M or self.M < 1:
            raise ValueError(f"M must be a positive integer, got {self.M}")
        if not 0.0 < self.mu <= 1.0:
            raise ValueError(f"mu must lie in (0, 1], got {self.mu}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "m_hat", 2 ** (self.k - 1) * self.M)

    @property
    def n_blocks(self) -> int:
        return 2 ** (self.k - 1)

    def with_mu(self, mu: float) -> "BasisSpec":
        return BasisSpec(self.k, self.M, mu)

    def __str__(self):
        return f"BasisSpec(k={self.k}, M={self.M}, mu={self.mu:g})"


def flat_index(n: int, m: int, spec: BasisSpec) -> int:
    """Block-major, degree-minor position of psi_{n,m} in the basis vector."""
    if not 1 <= n <= spec.n_blocks:
        raise IndexError(f"block index n={n} out of range 1..{spec.n_blocks}")
    if not 0 <= m < spec.M:
        raise IndexError(f"degree m={m} out of range 0..{spec.M - 1}")
    return (n - 1) * spec.M + m


def unflat_index(i: int, spec: BasisSpec) -> tuple[int, int]:
    if not 0 <= i < spec.m_hat:
        raise IndexError(f"flat index {i} out of range 0..{spec.m_hat - 1}")
    n, m = divmod(i, spec.M)
    return n + 1, m


def support(n: int, spec: BasisSpec) -> tuple[float, float]:
    K = spec.n_blocks
    if not 1 <= n <= K:
        raise IndexError(f"block index n={n} out of range 1..{K}")
    return ((n - 1) / K) ** (1.0 / spec.mu), (n / K) ** (1.0 / spec.mu)


def breakpoints(spec: BasisSpec) -> np.ndarray:
    K = spec.n_blocks
    bp = (np.arange(K + 1) / K) ** (1.0 / spec.mu)
    bp[0], bp[-1] = 0.0, 1.0
    return bp


@lru_cache(maxsize=None)
def scale_factor(m: int, k: int) -> float:
    """xi_m = 2^{(k-1)/2} / Upsilon_m, with xi_0 = 2^{(k-1)/2}."""
    s = 2.0 ** ((k - 1) / 2)
    return s if m == 0 else s / normality_coefficient(m)


def _active_block(zeta: np.ndarray, spec: BasisSpec) -> np.ndarray:
    K = spec.n_blocks
    t = zeta ** spec.mu
    return np.minimum(np.floor(K * t).astype(int), K - 1) + 1


def _check_domain(zeta):
    zeta = np.asarray(zeta, dtype=float)
    if np.any((zeta < 0) | (zeta > 1)) or np.any(np.isnan(zeta)):
        raise ValueError("wavelets are evaluated on [0, 1] only")
    return zeta


def _local_values(n: int, m: int, zeta: np.ndarray, spec: BasisSpec) -> np.ndarray:
    # s = 2^{k-1} (zeta^mu - (n-1)/2^{k-1}); Horner over the Bernoulli coefficients
    s = spec.n_blocks * zeta ** spec.mu - (n - 1)
    c = bernoulli_coefficients(m)
    out = np.full_like(s, c[-1])
    for coef in c[-2::-1]:
        out = out * s + coef
    return scale_factor(m, spec.k) * out


def eval_wavelet(n: int, m: int, zeta, spec: BasisSpec):
    """psi^mu_{n,m}(zeta); zero outside the block support (last block closed at 1)."""
    flat_index(n, m, spec)
    z = _check_domain(zeta)
    vals = np.where(_active_block(z, spec) == n, _local_values(n, m, z, spec), 0.0)
    return vals if vals.ndim else float(vals)


def eval_vector(zeta, spec: BasisSpec) -> np.ndarray:
    """Basis vector Psi(zeta); shape (m_hat,) for scalar input, (m_hat, len) otherwise."""
    z = _check_domain(zeta)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.zeros((spec.m_hat, z.size))
    blocks = _active_block(z, spec)
    for n in range(1, spec.n_blocks + 1):
        sel = blocks == n
        if not np.any(sel):
            continue
        for m in range(spec.M):
            out[(n - 1) * spec.M + m, sel] = _local_values(n, m, z[sel], spec)
    return out[:, 0] if scalar else out


def monomial_expansion(n: int, m: int, spec: BasisSpec) -> np.ndarray:
    """Coefficients w_q with psi_{n,m}(zeta) = sum_q w_q zeta^{mu q} on block n."""
    flat_index(n, m, spec)
    K = spec.n_blocks
    w = np.zeros(m + 1)
    bern = bernoulli_coefficients(m)  # C(m, j) B_{m-j}
    for j in range(m + 1):
        for q in range(j + 1):
            w[q] += bern[j] * math.comb(j, q) * float(K) ** q * float(-(n - 1)) ** (j - q)
    return scale_factor(m, spec.k) * w


def local_expansion(n: int, m: int, spec: BasisSpec) -> np.ndarray:
    """Coefficients v_j with psi_{n,m} = sum_j v_j (zeta^mu - lo^mu)^j on block n."""
    flat_index(n, m, spec)
    K = float(spec.n_blocks)
    bern = bernoulli_coefficients(m)
    return scale_factor(m, spec.k) * bern * K ** np.arange(m + 1)
