"""Channel model: parameters, block-fading draws and link metrics."""

from src.channel.model import ChannelRealization, pu_sinr, sample_channels, su_snr
from src.channel.params import Bits, SystemParams, db_to_linear, linear_to_db

__all__ = [
    "Bits",
    "ChannelRealization",
    "SystemParams",
    "db_to_linear",
    "linear_to_db",
    "pu_sinr",
    "sample_channels",
    "su_snr",
]
