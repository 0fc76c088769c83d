"""Split of a cooperative feedback budget F = A + B between IPC and CDI bits."""

import math
from dataclasses import dataclass
from typing import List

import numpy as np

from src.analysis.outage import chi, ipc_penalty_coeff, phi
from src.channel.params import SystemParams
from src.utils.errors import DomainError


@dataclass(frozen=True)
class BitAllocation:
    """Result of the analytic bit allocation.

    Attributes:
        total_bits: Budget F
        a_bits: IPC bits A* = F − B*
        b_bits: Integer CDI bits B*
        b_continuous: Unrounded B*
        chi: χ used by the closed form
        j_values: J(B) for B = 0..F
    """

    total_bits: int
    a_bits: int
    b_bits: int
    b_continuous: float
    chi: float
    j_values: List[float]


def j_function(params: SystemParams, b_bits, total_bits: int):
    """First-order outage penalty J(B) = φ·2^{-B/(L-1)} + c_ipc·2^{-(F-B)}."""
    b = np.asarray(b_bits, dtype=float)
    value = phi(params) * 2.0 ** (-b / (params.antennas - 1)) + ipc_penalty_coeff(params) * 2.0 ** (
        -(total_bits - b)
    )
    return float(value) if value.ndim == 0 else value


def optimal_bit_allocation(total_bits: int, params: SystemParams) -> BitAllocation:
    """
    Minimize J(B) subject to A + B = F.

    B* = min[((L−1)/L)·(F − log₂χ)⁺, F]; the integer split compares J at
    the floor and ceiling of B* and keeps the smaller (the floor on ties).

    Args:
        total_bits: Budget F (>= 1)
        params: System parameters

    Returns:
        BitAllocation

    Raises:
        DomainError: If F < 1
    """
    if total_bits < 1:
        raise DomainError(f"total feedback bits must be >= 1, got {total_bits}")
    dim = params.antennas
    chi_value = chi(params)
    b_star = min((dim - 1) / dim * max(total_bits - math.log2(chi_value), 0.0), float(total_bits))

    low = int(math.floor(b_star))
    high = min(int(math.ceil(b_star)), total_bits)
    b_int = high if j_function(params, high, total_bits) < j_function(params, low, total_bits) else low

    grid = np.arange(total_bits + 1)
    return BitAllocation(
        total_bits=total_bits,
        a_bits=total_bits - b_int,
        b_bits=b_int,
        b_continuous=b_star,
        chi=chi_value,
        j_values=j_function(params, grid, total_bits).tolist(),
    )


def lemma6_delta_p(params: SystemParams, a_bits: int, b_bits: int) -> float:
    """First-order IPC power loss ΔP = γ_pσ²/((L−1)θ_pλ)·2^{B/(L−1) − A}."""
    return (
        params.gamma_p
        * params.sigma2
        / ((params.antennas - 1) * params.theta_p * params.path_loss)
        * 2.0 ** (b_bits / (params.antennas - 1) - a_bits)
    )
