"""Optimal cost of both benchmark problems over a range of fractional orders.

Run: python3 demos/benchmark_costs.py
"""
from __future__ import annotations

from fbwocp import BasisSpec, solve_kkt
from fbwocp.cli import parse_problem

MUS = (1.0, 0.99, 0.9, 0.8, 0.7, 0.6, 0.5)


def main() -> None:
    for name, M in (("problem1", 3), ("problem2", 4)):
        problem = parse_problem(name)
        print(f"{name} (k=2, M={M})")
        print(f"{'mu':>6} {'OBW':>10} {'FBW':>10}")
        for mu in MUS:
            spec = BasisSpec(2, M, mu)
            obw = solve_kkt(problem, spec, method="obw").cost
            fbw = solve_kkt(problem, spec, method="fbw").cost
            print(f"{mu:>6g} {obw:>10.6f} {fbw:>10.6f}")
        print()


if __name__ == "__main__":
    main()
