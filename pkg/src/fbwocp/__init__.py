"""Fractional Bernoulli wavelet solver for linear-quadratic fractional optimal control."""
from .basis import BasisSpec, breakpoints, eval_vector, eval_wavelet, flat_index, support
from .operational import (
    basis_moments,
    dual_matrix,
    gram_tensor,
    integration_matrix,
    product_matrix,
    project,
)
from .solver import (
    FocpProblem,
    FocpSolution,
    discretize,
    dynamics_residual,
    evaluate_solution,
    solve_kkt,
)

__version__ = "0.1.0"
