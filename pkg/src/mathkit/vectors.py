"""Complex-vector arithmetic over the last array axis.

A complex vector is a ``complex128`` array whose last axis holds the L
elements; any leading axes are batch axes, so every function here works on
a single vector of shape ``(L,)`` or on a block of vectors ``(n, L)``.
"""

from typing import Optional, Tuple, Union

import numpy as np

from src.utils.errors import DimensionError

ComplexVector = np.ndarray
Shape = Union[int, Tuple[int, ...]]


def _check_lengths(u: np.ndarray, v: np.ndarray) -> None:
    if u.shape[-1] != v.shape[-1]:
        raise DimensionError(
            f"vector length mismatch: {u.shape[-1]} != {v.shape[-1]}"
        )


def inner_product(u: ComplexVector, v: ComplexVector) -> np.ndarray:
    """
    Hermitian inner product u†v along the last axis.

    Args:
        u: Left operand (conjugated)
        v: Right operand

    Returns:
        Complex scalar, or an array of them for batched input

    Raises:
        DimensionError: If the vector lengths differ
    """
    u = np.asarray(u, dtype=np.complex128)
    v = np.asarray(v, dtype=np.complex128)
    _check_lengths(u, v)
    return np.sum(np.conj(u) * v, axis=-1)


def norm(v: ComplexVector) -> np.ndarray:
    """Euclidean norm along the last axis."""
    return np.linalg.norm(np.asarray(v, dtype=np.complex128), axis=-1)


def normalize(v: ComplexVector) -> ComplexVector:
    """Scale v to unit norm. Zero vectors are returned unchanged."""
    v = np.asarray(v, dtype=np.complex128)
    n = norm(v)[..., np.newaxis]
    return np.divide(v, n, out=np.zeros_like(v), where=n > 0)


def project_orthogonal(v: ComplexVector, u_unit: ComplexVector) -> ComplexVector:
    """
    Remove the component of v along the unit vector u_unit.

    The result w satisfies w†u_unit = 0 and v = (u_unit†v)·u_unit + w.

    Args:
        v: Vector to project
        u_unit: Unit-norm direction to remove

    Returns:
        Projection of v onto the orthogonal complement of u_unit
    """
    v = np.asarray(v, dtype=np.complex128)
    u_unit = np.asarray(u_unit, dtype=np.complex128)
    coeff = inner_product(u_unit, v)
    return v - coeff[..., np.newaxis] * u_unit


def complex_gaussian(
    rng: np.random.Generator, shape: Shape, variance: float = 1.0
) -> np.ndarray:
    """
    Draw circularly symmetric CN(0, variance) samples.

    Real and imaginary parts are independent N(0, variance/2).
    """
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def unit_uniform_sphere(
    dim: int, rng: np.random.Generator, size: Optional[int] = None
) -> ComplexVector:
    """
    Draw isotropic unit vectors in C^dim.

    Args:
        dim: Vector length (>= 1)
        rng: Random generator owned by the caller
        size: Number of vectors; None returns a single vector

    Returns:
        Array of shape (dim,) or (size, dim)
    """
    if dim < 1:
        raise DimensionError(f"dimension must be >= 1, got {dim}")
    shape = (dim,) if size is None else (size, dim)
    g = complex_gaussian(rng, shape)
    return g / norm(g)[..., np.newaxis]


def random_orthogonal_unit(u_unit: ComplexVector, rng: np.random.Generator) -> ComplexVector:
    """
    Draw a unit vector isotropic within the orthogonal complement of u_unit.

    Works row-wise for a block of directions.
    """
    u_unit = np.asarray(u_unit, dtype=np.complex128)
    g = complex_gaussian(rng, u_unit.shape)
    return normalize(project_orthogonal(g, u_unit))
