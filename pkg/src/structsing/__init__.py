"""Structured distance to singularity via singular vector spaces.

Given a real square matrix A in a linear structure T (Toeplitz, Hankel,
symmetric, a sparsity pattern, or any span), find the smallest Frobenius-norm
Delta in T such that A + Delta is singular.
"""

from .algorithms import (
    DualState,
    SolveResult,
    SolverConfig,
    licq_check,
    select_space,
    solve,
    solve_augmented_lagrangian,
    solve_tikhonov_bcd,
    solve_unregularized,
)
from .generators import gen_sparse, gen_toeplitz
from .structures import (
    ProblemInstance,
    StructuredBasis,
    coefficients_of,
    full_basis,
    hankel_basis,
    make_instance,
    materialize,
    orthonormalize,
    sparse_pattern_basis,
    symmetric_basis,
    toeplitz_basis,
)

__all__ = [
    "DualState",
    "ProblemInstance",
    "SolveResult",
    "SolverConfig",
    "StructuredBasis",
    "coefficients_of",
    "full_basis",
    "gen_sparse",
    "gen_toeplitz",
    "hankel_basis",
    "licq_check",
    "make_instance",
    "materialize",
    "orthonormalize",
    "select_space",
    "solve",
    "solve_augmented_lagrangian",
    "solve_tikhonov_bcd",
    "solve_unregularized",
    "sparse_pattern_basis",
    "symmetric_basis",
    "toeplitz_basis",
]
