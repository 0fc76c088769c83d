"""Special functions needed by the outage formulas.

Only integer orders of the incomplete gamma function occur (L-1 and L-2),
so the finite series is used; it is exact up to floating-point rounding.
"""

import math

import numpy as np
from scipy import special

from src.utils.errors import DomainError


def gamma_function(n: int) -> float:
    """Gamma function at a positive integer, (n-1)!."""
    if n < 1:
        raise DomainError(f"gamma order must be >= 1, got {n}")
    return float(math.factorial(n - 1))


def upper_incomplete_gamma(n: int, x):
    """
    Upper incomplete gamma function Γ(n, x) for integer order n >= 1.

    Γ(n, x) = (n-1)! · e^{-x} · Σ_{k=0}^{n-1} x^k / k!

    Args:
        n: Integer order (>= 1)
        x: Non-negative real, scalar or array

    Returns:
        Γ(n, x) with the shape of x

    Raises:
        DomainError: If n < 1 or any x < 0
    """
    if int(n) != n or n < 1:
        raise DomainError(f"incomplete gamma needs an integer order >= 1, got {n}")
    n = int(n)
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0):
        raise DomainError("incomplete gamma argument must be non-negative")

    term = np.ones_like(x_arr)
    total = np.ones_like(x_arr)
    for k in range(1, n):
        term = term * x_arr / k
        total = total + term
    value = math.factorial(n - 1) * np.exp(-x_arr) * total
    return float(value) if np.ndim(value) == 0 else value


def regularized_upper_gamma(n: int, x):
    """Γ(n, x)/Γ(n): survival function of a Gamma(n, 1) variable."""
    return upper_incomplete_gamma(n, x) / gamma_function(n)


def beta_function(x: float, y: float) -> float:
    """Beta function 𝓑(x, y) = Γ(x)Γ(y)/Γ(x+y)."""
    return float(special.beta(x, y))
