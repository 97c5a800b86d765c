from .field import GF, QQ, FieldSpec, is_prime
from .matrix import (
    ExactMatrix,
    as_matrix,
    column_basis,
    inverse,
    inverse_array,
    kernel_array,
    kernel_basis,
    left_inverse,
    rank_array,
    rank_witness,
    row_space_basis,
    rref,
    rref_array,
    solve_affine,
    solve_array,
    stack_columns,
)
from ._kernels import BACKEND

__all__ = [
    "BACKEND",
    "ExactMatrix",
    "FieldSpec",
    "GF",
    "QQ",
    "as_matrix",
    "column_basis",
    "inverse",
    "inverse_array",
    "is_prime",
    "kernel_array",
    "kernel_basis",
    "left_inverse",
    "rank_array",
    "rank_witness",
    "row_space_basis",
    "rref",
    "rref_array",
    "solve_affine",
    "solve_array",
    "stack_columns",
]
