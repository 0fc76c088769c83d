"""OCB and NOCB transmit beamformers built from quantized feedback."""

from dataclasses import dataclass

import numpy as np

from src.channel.model import ChannelRealization
from src.feedback.cdi import CdiQuantization
from src.feedback.ipc import BeamformingMode, IpcSignal
from src.mathkit import inner_product, norm

BUDGET_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class BeamformerOutput:
    """Transmit beamformer and its power.

    Attributes:
        f: Beamforming vector(s), shape (L,) or (n, L)
        power: ‖f‖²
        mode: OCB or NOCB
    """

    f: np.ndarray
    power: np.ndarray
    mode: BeamformingMode

    @classmethod
    def from_vector(cls, f: np.ndarray, mode: BeamformingMode) -> "BeamformerOutput":
        return cls(f=f, power=norm(f) ** 2, mode=mode)


def _unit_phase(z: np.ndarray) -> np.ndarray:
    magnitude = np.abs(z)
    return np.divide(z, magnitude, out=np.zeros_like(z), where=magnitude > 0)


def ocb_beamformer(cdi: CdiQuantization, ipc: IpcSignal) -> BeamformerOutput:
    """
    Orthogonal cognitive beamformer f_o = √η̂·ŝ_⊥.

    Maximum-ratio transmission within null(ŝ_x). The beamformer is zero when
    b = 0, since the SU direction then carries no component outside ŝ_x.

    Args:
        cdi: CDI quantization
        ipc: IPC signal providing η̂

    Returns:
        BeamformerOutput in OCB mode
    """
    amplitude = np.sqrt(np.asarray(ipc.ocb_power, dtype=float))
    amplitude = np.where(np.abs(cdi.b) > 0, amplitude, 0.0)
    f = amplitude[..., np.newaxis] * cdi.s_hat_perp
    return BeamformerOutput.from_vector(f, BeamformingMode.OCB)


def nocb_beamformer(cdi: CdiQuantization, ipc: IpcSignal) -> BeamformerOutput:
    """
    Non-orthogonal cognitive beamformer f_n = α·ŝ_x + β·ŝ_⊥.

    If μ̂₁ ≥ |a|²μ̂₂ the interference-direction budget is slack and f_n is
    maximum-ratio transmission √μ̂₂·(a·ŝ_x + b·ŝ_⊥). Otherwise
    α = (a/|a|)·√μ̂₁ saturates the ŝ_x budget and β = (b/|b|)·√(μ̂₂ − μ̂₁)
    spends the rest along ŝ_⊥.

    Args:
        cdi: CDI quantization (a, b, ŝ_x, ŝ_⊥)
        ipc: IPC signal providing (μ̂₁, μ̂₂)

    Returns:
        BeamformerOutput in NOCB mode
    """
    mu1 = np.asarray(ipc.mu1, dtype=float)
    mu2 = np.asarray(ipc.mu2, dtype=float)
    a = np.asarray(cdi.a, dtype=np.complex128)
    b = np.asarray(cdi.b, dtype=np.complex128)

    mrt = mu1 >= np.abs(a) ** 2 * mu2
    alpha = np.where(mrt, np.sqrt(mu2) * a, _unit_phase(a) * np.sqrt(mu1))
    beta = np.where(mrt, np.sqrt(mu2) * b, _unit_phase(b) * np.sqrt(np.maximum(mu2 - mu1, 0.0)))
    f = alpha[..., np.newaxis] * cdi.s_hat_x + beta[..., np.newaxis] * cdi.s_hat_perp
    return BeamformerOutput.from_vector(f, BeamformingMode.NOCB)


def interference_power(f: np.ndarray, real: ChannelRealization) -> np.ndarray:
    """Interference at the PU receiver |f†h_x|² = λ·g_x·|f†s_x|²."""
    return np.abs(inner_product(f, real.h_x)) ** 2


def verify_interference_budget(f: np.ndarray, real: ChannelRealization, omega) -> np.ndarray:
    """
    Check the interference constraint I ≤ ω.

    Blocks with ω < 0 are unconstrained and always pass.

    Returns:
        Boolean (array) per block
    """
    omega = np.asarray(omega, dtype=float)
    return (omega < 0) | (interference_power(f, real) <= omega + BUDGET_TOLERANCE)


def received_power(f: np.ndarray, s_s: np.ndarray) -> np.ndarray:
    """Beamforming gain |f†s_s|² towards the SU link direction."""
    return np.abs(inner_product(f, s_s)) ** 2
