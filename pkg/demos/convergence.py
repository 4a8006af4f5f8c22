"""Error decay against the closed-form solution of the first benchmark at mu = 1.

Prints the max pointwise error on the 0.1..0.9 grid as M grows, next to the
a priori truncation bound for e^{-2 zeta} on a single block.
"""
from __future__ import annotations

import numpy as np

from fbwocp import BasisSpec
from fbwocp.analysis import convergence_sweep, estimate_derivative_bound, exact_problem1, truncation_bound
from fbwocp.cli import parse_problem


def main() -> None:
    problem = parse_problem("problem1")
    for k in (2, 3):
        rows = convergence_sweep(problem, [BasisSpec(k, M) for M in range(2, 8)], exact=exact_problem1)
        print(f"k = {k}")
        for r in rows:
            print(f"  M={r.spec.M}  J={r.cost:.12f}  max err={r.max_err:.3e}")

    print("\ntruncation bound for e^(-2 zeta), k = 1")
    for m in range(1, 9):
        Mt = estimate_derivative_bound(lambda x: np.exp(-2 * x), m)
        print(f"  m_hat={m}  M~={Mt:8.2f}  bound={truncation_bound(Mt, m):.3e}")


if __name__ == "__main__":
    main()
