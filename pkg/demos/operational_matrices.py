"""Dual and integration matrices of the fractional basis, and what the printed ones correspond to.

The Gram matrix at mu = 0.9 reproduces the published values. The published
integration matrix does not match the Riemann-Liouville operator; it matches
mu times the projected ordinary integral, shown side by side here.
"""
from __future__ import annotations

import numpy as np

from fbwocp import BasisSpec, dual_matrix, integration_matrix
from fbwocp.validation import PRINTED_D09, PRINTED_P09, integration_fidelity

np.set_printoptions(precision=6, suppress=True, linewidth=120)


def main() -> None:
    D = dual_matrix(BasisSpec(2, 3, 0.9)).entries
    print("D(0.9), k=2, M=3\n", D)
    print("max deviation from printed blocks:", np.abs(np.vstack([D[:3, :3], D[3:, 3:]]) - PRINTED_D09).max())
    print("D(1) = I up to", np.abs(dual_matrix(BasisSpec(2, 3, 1.0)).entries - np.eye(6)).max())
    print("D(1), k=1, M=4 (degrees 1 and 3 are not orthogonal)\n", dual_matrix(BasisSpec(1, 4, 1.0)).entries)

    spec = BasisSpec(2, 2, 0.9)
    P = integration_matrix(spec).entries
    scaled = 0.9 * integration_matrix(spec, order=1.0).entries
    print("\nP^0.9 (Riemann-Liouville), k=2, M=2\n", P)
    print("0.9 * P^1 on the same basis\n", scaled)
    print("printed\n", PRINTED_P09)
    print("RL vs printed:", np.abs(P - PRINTED_P09).max(), " scaled vs printed:", np.abs(scaled - PRINTED_P09).max())
    print("RL fidelity per row (D-norm):", integration_fidelity(spec))


if __name__ == "__main__":
    main()
