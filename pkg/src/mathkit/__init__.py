"""Special functions and complex-vector arithmetic."""

from src.mathkit.special import (
    beta_function,
    gamma_function,
    regularized_upper_gamma,
    upper_incomplete_gamma,
)
from src.mathkit.vectors import (
    ComplexVector,
    complex_gaussian,
    inner_product,
    norm,
    normalize,
    project_orthogonal,
    random_orthogonal_unit,
    unit_uniform_sphere,
)

__all__ = [
    "ComplexVector",
    "beta_function",
    "complex_gaussian",
    "gamma_function",
    "inner_product",
    "norm",
    "normalize",
    "project_orthogonal",
    "random_orthogonal_unit",
    "regularized_upper_gamma",
    "unit_uniform_sphere",
    "upper_incomplete_gamma",
]
