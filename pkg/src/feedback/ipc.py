"""Interference power control (IPC) signals for OCB and NOCB.

Every function accepts scalars or arrays with a leading batch axis.
"""

from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import TYPE_CHECKING, Optional, Tuple

import numpy as np

from src.channel.params import SystemParams
from src.feedback.cdi import CdiQuantization

if TYPE_CHECKING:
    from src.feedback.codebook import IpcCodebook, IpcCodebookSet


class BeamformingMode(str, Enum):
    """Cognitive beamforming variant."""

    OCB = "ocb"
    NOCB = "nocb"


class Branch(IntEnum):
    """Which case of the IPC design fired for a block."""

    PU_OUTAGE = 0
    NON_ORTHOGONAL = 1
    ORTHOGONAL = 2


@dataclass(frozen=True, eq=False)
class IpcSignal:
    """Per-block IPC feedback message.

    Attributes:
        outage_bit: ω < 0 indicator
        ocb_power: Quantized OCB power η̂ (η̃ with feedforward)
        mu1: Power allowed along ŝ_x (first NOCB component)
        mu2: Total power allowed (second NOCB component)
        branch: Branch per block
        level_index: Codebook index sent, -1 when no index is sent
        mode: OCB or NOCB
        feedforward: Whether ŝ_s was fed forward to the PU receiver
    """

    outage_bit: np.ndarray
    ocb_power: np.ndarray
    mu1: np.ndarray
    mu2: np.ndarray
    branch: np.ndarray
    level_index: np.ndarray
    mode: BeamformingMode
    feedforward: bool = False

    @property
    def nocb_pair(self) -> Tuple[np.ndarray, np.ndarray]:
        """(μ̂₁, μ̂₂), or (μ̌₁, μ̌₂) with feedforward."""
        return self.mu1, self.mu2

    def header(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Two-bit message header (outage, branch).

        The branch bit is set for the non-orthogonal NOCB case; it is always
        clear in OCB mode and when the outage bit is set.
        """
        return (
            np.asarray(self.outage_bit, dtype=bool),
            np.asarray(self.branch) == Branch.NON_ORTHOGONAL,
        )

    def row(self, index: int) -> "IpcSignal":
        """Extract one block from a batch."""
        return IpcSignal(
            outage_bit=self.outage_bit[index],
            ocb_power=self.ocb_power[index],
            mu1=self.mu1[index],
            mu2=self.mu2[index],
            branch=self.branch[index],
            level_index=self.level_index[index],
            mode=self.mode,
            feedforward=self.feedforward,
        )


def compute_omega(g_p, params: SystemParams):
    """Tolerable interference margin ω = σ²(γ_p·g_p/θ_p − 1); negative in PU outage."""
    return params.sigma2 * (params.gamma_p * np.asarray(g_p, dtype=float) / params.theta_p - 1.0)


def eta_signal(omega, g_x, error, params: SystemParams):
    """
    Unquantized OCB power ω/(λ·g_x·error), P_max when ω < 0.

    A zero denominator with ω ≥ 0 yields +inf.
    """
    omega = np.asarray(omega, dtype=float)
    denom = params.path_loss * np.asarray(g_x, dtype=float) * np.asarray(error, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(denom > 0, omega / np.where(denom > 0, denom, 1.0), np.inf)
    return np.where(omega >= 0, ratio, params.p_max)


def nu_signal(omega, g_x, epsilon, penalty_error, params: SystemParams):
    """
    Unquantized NOCB amplitude ν (ν́ when penalty_error is δ).

    ν = (√(ω/(λg_x)) − √(penalty_error·P_max))/√(1−ε); NaN when ω < 0.
    """
    omega = np.asarray(omega, dtype=float)
    g_x = np.asarray(g_x, dtype=float)
    budget = np.sqrt(np.maximum(omega, 0.0) / (params.path_loss * g_x))
    leak = np.sqrt(np.asarray(penalty_error, dtype=float) * params.p_max)
    with np.errstate(divide="ignore", invalid="ignore"):
        nu = (budget - leak) / np.sqrt(1.0 - np.asarray(epsilon, dtype=float))
    return np.where(omega >= 0, nu, np.nan)


def ipc_ocb_unquantized(omega, g_x, cdi: CdiQuantization, params: SystemParams, feedforward: bool = False):
    """
    OCB IPC signal before quantization.

    Args:
        omega: Interference margin ω
        g_x: SU->PU channel power
        cdi: CDI quantization (ε, δ)
        params: System parameters
        feedforward: Use δ (feedforward) instead of ε

    Returns:
        η (or ή with feedforward)
    """
    error = cdi.delta if feedforward else cdi.epsilon
    return eta_signal(omega, g_x, error, params)


def _floor(values, codebook: Optional["IpcCodebook"]):
    if codebook is None:
        return np.asarray(values, dtype=float), np.full(np.shape(values), -1, dtype=np.int64)
    return codebook.floor(values)


def quantize_ipc_ocb(
    eta,
    codebook: Optional["IpcCodebook"],
    omega,
    params: SystemParams,
    feedforward: bool = False,
) -> IpcSignal:
    """
    Quantize the OCB IPC signal with the floor operator.

    η̂ = ⌊η⌋ when ω ≥ 0 and η < P_max, otherwise P_max.

    Args:
        eta: Unquantized IPC signal (may be +inf)
        codebook: Equal-probability codebook; None sends η unquantized
        omega: Interference margin ω
        params: System parameters
        feedforward: Recorded on the resulting signal

    Returns:
        IpcSignal in OCB mode
    """
    eta = np.asarray(eta, dtype=float)
    omega = np.asarray(omega, dtype=float)
    active = omega >= 0
    below_cap = active & (eta < params.p_max)
    floored, index = _floor(np.where(below_cap, eta, 0.0), codebook)
    power = np.where(below_cap, floored, params.p_max)
    return IpcSignal(
        outage_bit=~active,
        ocb_power=power,
        mu1=np.where(active, 0.0, params.p_max),
        mu2=power,
        branch=np.where(active, Branch.ORTHOGONAL, Branch.PU_OUTAGE).astype(np.int8),
        level_index=np.where(below_cap, index, -1),
        mode=BeamformingMode.OCB,
        feedforward=feedforward,
    )


def ipc_nocb(
    omega,
    g_x,
    cdi: CdiQuantization,
    codebooks: Optional["IpcCodebookSet"],
    params: SystemParams,
    feedforward: bool = False,
) -> IpcSignal:
    """
    Compute the NOCB IPC message (μ̂₁, μ̂₂), or μ̌ with feedforward.

    Cases per block:
        ω < 0: (P_max, P_max)
        ν ≥ 0: (min(⌊ν²⌋, P_max), P_max)
        ν < 0: (0, η̂) as in OCB

    Args:
        omega: Interference margin ω
        g_x: SU->PU channel power
        cdi: CDI quantization
        codebooks: η and ν² codebooks; None sends both unquantized
        params: System parameters
        feedforward: Use δ in place of ε in the interference penalty

    Returns:
        IpcSignal in NOCB mode
    """
    omega = np.asarray(omega, dtype=float)
    active = omega >= 0

    eta = ipc_ocb_unquantized(omega, g_x, cdi, params, feedforward)
    ocb = quantize_ipc_ocb(eta, codebooks.eta if codebooks else None, omega, params, feedforward)

    penalty = cdi.delta if feedforward else cdi.epsilon
    nu = nu_signal(omega, g_x, cdi.epsilon, penalty, params)
    with np.errstate(invalid="ignore"):
        non_orthogonal = active & (nu >= 0)
    nu_sq = np.where(non_orthogonal, nu, 0.0) ** 2
    floored, nu_index = _floor(nu_sq, codebooks.nu if codebooks else None)
    mu1_hat = np.minimum(floored, params.p_max)

    branch = np.where(
        non_orthogonal,
        Branch.NON_ORTHOGONAL,
        np.where(active, Branch.ORTHOGONAL, Branch.PU_OUTAGE),
    ).astype(np.int8)
    return IpcSignal(
        outage_bit=~active,
        ocb_power=ocb.ocb_power,
        mu1=np.where(non_orthogonal, mu1_hat, ocb.mu1),
        mu2=np.where(non_orthogonal, params.p_max, ocb.mu2),
        branch=branch,
        level_index=np.where(non_orthogonal, nu_index, ocb.level_index),
        mode=BeamformingMode.NOCB,
        feedforward=feedforward,
    )
