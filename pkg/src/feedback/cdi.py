"""Channel-direction quantization and the decomposition it induces.

The default quantizer is the statistical sphere-cap model: the quantized
direction sits at chordal distance ε from the true one, with
Pr(ε ≤ τ) = 2^B τ^{L-1} on [0, 2^{-B/(L-1)}]. Random vector quantization
(RVQ) over an explicit codebook is kept for small-B validation.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.channel.params import Bits
from src.mathkit import (
    inner_product,
    norm,
    normalize,
    project_orthogonal,
    random_orthogonal_unit,
    unit_uniform_sphere,
)
from src.utils.errors import ResourceError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

MAX_RVQ_BITS = 16
# Upper bound on (trials x codewords) inner products evaluated at once.
_RVQ_CHUNK_ELEMENTS = 1 << 22


@dataclass(frozen=True, eq=False)
class CdiQuantization:
    """Quantized SU->PU direction and the induced decomposition.

    With s the SU direction known at the transmitter, s = a·ŝ_x + b·ŝ_⊥.

    Attributes:
        s_hat_x: Quantized SU->PU shape ŝ_x
        epsilon: Quantization error ε = 1 - |ŝ_x†s_x|²
        a: ŝ_x†s
        b: ŝ_⊥†s (real, non-negative by construction)
        s_hat_perp: Unit vector of s projected onto null(ŝ_x)
        delta: δ = |s_x†ŝ_⊥|², never larger than ε
    """

    s_hat_x: np.ndarray
    epsilon: np.ndarray
    a: np.ndarray
    b: np.ndarray
    s_hat_perp: np.ndarray
    delta: np.ndarray

    @property
    def kappa(self) -> np.ndarray:
        """δ/ε, the share of the quantization error seen along ŝ_⊥ (0 when ε = 0)."""
        eps = np.asarray(self.epsilon)
        return np.divide(self.delta, eps, out=np.zeros_like(eps), where=eps > 0)

    def row(self, index: int) -> "CdiQuantization":
        """Extract one trial from a batch."""
        return CdiQuantization(
            s_hat_x=self.s_hat_x[index],
            epsilon=self.epsilon[index],
            a=self.a[index],
            b=self.b[index],
            s_hat_perp=self.s_hat_perp[index],
            delta=self.delta[index],
        )


def _fallback_perp(s_hat_x: np.ndarray) -> np.ndarray:
    # Unit vector orthogonal to ŝ_x built from the basis vector least aligned with it.
    idx = np.argmin(np.abs(s_hat_x), axis=-1)
    basis = np.zeros_like(s_hat_x)
    np.put_along_axis(basis, np.expand_dims(idx, -1), 1.0, axis=-1)
    return normalize(project_orthogonal(basis, s_hat_x))


def decompose_cdi(s_x: np.ndarray, s_s: np.ndarray, s_hat_x: np.ndarray) -> CdiQuantization:
    """
    Compute ε, a, b, ŝ_⊥ and δ for a quantized direction.

    Args:
        s_x: True SU->PU shape (unit)
        s_s: SU link shape known at the transmitter (unit; possibly quantized)
        s_hat_x: Quantized SU->PU shape (unit)

    Returns:
        CdiQuantization
    """
    s_x = np.asarray(s_x, dtype=np.complex128)
    s_s = np.asarray(s_s, dtype=np.complex128)
    s_hat_x = np.asarray(s_hat_x, dtype=np.complex128)

    a = inner_product(s_hat_x, s_s)
    residual = project_orthogonal(s_s, s_hat_x)
    b = norm(residual)
    s_hat_perp = np.where(
        (b > 0)[..., np.newaxis],
        normalize(residual),
        _fallback_perp(s_hat_x),
    )
    epsilon = np.clip(1.0 - np.abs(inner_product(s_hat_x, s_x)) ** 2, 0.0, 1.0)
    delta = np.minimum(np.abs(inner_product(s_x, s_hat_perp)) ** 2, epsilon)
    return CdiQuantization(
        s_hat_x=s_hat_x,
        epsilon=epsilon,
        a=a,
        b=b.astype(np.complex128),
        s_hat_perp=s_hat_perp,
        delta=delta,
    )


def sphere_cap_perturb(
    s: np.ndarray, bits: Bits, rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Quantize unit directions with the statistical sphere-cap model.

    ε = 2^{-B/(L-1)}·U^{1/(L-1)} by inverse transform and
    ŝ = √(1-ε)·s + √ε·w with w isotropic in the orthogonal complement of s.

    Args:
        s: Unit direction(s), shape (L,) or (n, L)
        bits: Quantizer resolution B; None leaves s unchanged
        rng: Random generator

    Returns:
        Tuple of (ŝ, ε)
    """
    s = np.asarray(s, dtype=np.complex128)
    if bits is None:
        return s.copy(), np.zeros(s.shape[:-1])
    dim = s.shape[-1]
    radius = 2.0 ** (-bits / (dim - 1))
    u = np.asarray(rng.random(s.shape[:-1]))
    eps = radius * u ** (1.0 / (dim - 1))
    w = random_orthogonal_unit(s, rng)
    s_hat = np.sqrt(1.0 - eps)[..., np.newaxis] * s + np.sqrt(eps)[..., np.newaxis] * w
    return s_hat, eps


def quantize_cdi_statistical(
    s_x: np.ndarray, s_s: np.ndarray, bits: Bits, rng: np.random.Generator
) -> CdiQuantization:
    """
    Quantize the SU->PU direction with the sphere-cap model.

    Args:
        s_x: True SU->PU shape
        s_s: SU link shape known at the transmitter
        bits: CDI feedback bits B; None gives perfect CDI
        rng: Random generator

    Returns:
        CdiQuantization
    """
    s_hat_x, _ = sphere_cap_perturb(s_x, bits, rng)
    return decompose_cdi(s_x, s_s, s_hat_x)


def quantize_local_cdi(s_s: np.ndarray, bits: Bits, rng: np.random.Generator) -> np.ndarray:
    """
    Quantize the SU link shape used for local feedback and feedforward.

    Args:
        s_s: True SU link shape
        bits: Local feedback bits B'; None returns s_s unchanged
        rng: Random generator

    Returns:
        Quantized shape ŝ_s
    """
    s_hat, _ = sphere_cap_perturb(s_s, bits, rng)
    return s_hat


def rvq_codebook(bits: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    """Random codebook of 2^bits isotropic unit vectors, shape (2^bits, dim)."""
    if bits > MAX_RVQ_BITS:
        raise ResourceError(f"RVQ codebook with {bits} bits exceeds {MAX_RVQ_BITS}")
    logger.debug(f"Drawing RVQ codebook of {2**bits} codewords in C^{dim}")
    return unit_uniform_sphere(dim, rng, size=2**bits)


def rvq_select(s_x: np.ndarray, codebook: np.ndarray) -> np.ndarray:
    """
    Pick the codeword maximizing |c†s_x|² for each direction.

    Args:
        s_x: Unit direction(s), shape (L,) or (n, L)
        codebook: Codewords, shape (2^B, L)

    Returns:
        Selected codewords with the shape of s_x
    """
    s_x = np.asarray(s_x, dtype=np.complex128)
    flat = s_x.reshape(-1, s_x.shape[-1])
    chunk = max(1, _RVQ_CHUNK_ELEMENTS // codebook.shape[0])
    best = np.empty(flat.shape[0], dtype=np.int64)
    for start in range(0, flat.shape[0], chunk):
        gains = np.abs(flat[start : start + chunk] @ codebook.conj().T) ** 2
        best[start : start + chunk] = np.argmax(gains, axis=-1)
    return codebook[best].reshape(s_x.shape)


def quantize_cdi_rvq(
    s_x: np.ndarray,
    s_s: np.ndarray,
    bits: Bits,
    rng: np.random.Generator,
    codebook: Optional[np.ndarray] = None,
) -> CdiQuantization:
    """
    Quantize the SU->PU direction to the best codeword of a random codebook.

    One codebook is drawn per call and shared by every trial of a batch
    unless ``codebook`` is given.

    Raises:
        ResourceError: If bits is None or larger than MAX_RVQ_BITS
    """
    if bits is None or bits > MAX_RVQ_BITS:
        raise ResourceError(f"RVQ needs a finite codebook of at most {MAX_RVQ_BITS} bits")
    s_x = np.asarray(s_x, dtype=np.complex128)
    if codebook is None:
        codebook = rvq_codebook(bits, s_x.shape[-1], rng)
    return decompose_cdi(s_x, s_s, rvq_select(s_x, codebook))
