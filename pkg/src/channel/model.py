"""Block-fading channel draws and the primary/secondary link metrics."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.channel.params import SystemParams
from src.mathkit import complex_gaussian, inner_product, norm


@dataclass(frozen=True)
class ChannelRealization:
    """One block-fading draw (or a batch of them along the leading axis).

    Attributes:
        h_x: SU->PU channel, entries CN(0, λ)
        h_s: SU link channel, entries CN(0, 1)
        g_p: PU link channel power, Exp(1)
        g_x: ‖h_x‖²/λ
        s_x: h_x/‖h_x‖
        g_s: ‖h_s‖²
        s_s: h_s/‖h_s‖
    """

    h_x: np.ndarray
    h_s: np.ndarray
    g_p: np.ndarray
    g_x: np.ndarray
    s_x: np.ndarray
    g_s: np.ndarray
    s_s: np.ndarray

    @classmethod
    def from_vectors(
        cls, h_x: np.ndarray, h_s: np.ndarray, g_p, path_loss: float
    ) -> "ChannelRealization":
        """Build a realization and its gain/shape decomposition from raw channels."""
        h_x = np.asarray(h_x, dtype=np.complex128)
        h_s = np.asarray(h_s, dtype=np.complex128)
        norm_x = norm(h_x)
        norm_s = norm(h_s)
        return cls(
            h_x=h_x,
            h_s=h_s,
            g_p=np.asarray(g_p, dtype=float),
            g_x=norm_x**2 / path_loss,
            s_x=h_x / norm_x[..., np.newaxis],
            g_s=norm_s**2,
            s_s=h_s / norm_s[..., np.newaxis],
        )

    def __len__(self) -> int:
        return 1 if self.h_x.ndim == 1 else self.h_x.shape[0]

    def row(self, index: int) -> "ChannelRealization":
        """Extract one realization from a batch."""
        return ChannelRealization(
            h_x=self.h_x[index],
            h_s=self.h_s[index],
            g_p=self.g_p[index],
            g_x=self.g_x[index],
            s_x=self.s_x[index],
            g_s=self.g_s[index],
            s_s=self.s_s[index],
        )


def sample_channels(
    params: SystemParams, rng: np.random.Generator, size: Optional[int] = None
) -> ChannelRealization:
    """
    Draw independent channel realizations.

    Draw order is fixed (h_x, h_s, g_p) so that paired experiments sharing a
    generator see the same channels.

    Args:
        params: System parameters
        rng: Random generator owned by the caller
        size: Batch size; None draws a single realization

    Returns:
        ChannelRealization with decomposition fields populated
    """
    shape = (params.antennas,) if size is None else (size, params.antennas)
    h_x = complex_gaussian(rng, shape, variance=params.path_loss)
    h_s = complex_gaussian(rng, shape, variance=1.0)
    g_p = rng.exponential(1.0, size=size)
    return ChannelRealization.from_vectors(h_x, h_s, g_p, params.path_loss)


def pu_sinr(real: ChannelRealization, f: np.ndarray, params: SystemParams):
    """
    Receive SINR at the PU receiver: γ_p·g_p / (1 + |f†h_x|²/σ²).

    Interference from the PU transmitter to the SU receiver is not modeled.
    """
    interference = np.abs(inner_product(f, real.h_x)) ** 2
    return params.gamma_p * real.g_p / (1.0 + interference / params.sigma2)


def su_snr(real: ChannelRealization, f: np.ndarray, params: SystemParams):
    """Receive SNR at the SU receiver: |f†h_s|²/σ²."""
    return np.abs(inner_product(f, real.h_s)) ** 2 / params.sigma2
