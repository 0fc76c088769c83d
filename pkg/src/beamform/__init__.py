"""Cognitive transmit beamforming."""

from src.beamform.beamformers import (
    BUDGET_TOLERANCE,
    BeamformerOutput,
    interference_power,
    nocb_beamformer,
    ocb_beamformer,
    received_power,
    verify_interference_budget,
)

__all__ = [
    "BUDGET_TOLERANCE",
    "BeamformerOutput",
    "interference_power",
    "nocb_beamformer",
    "ocb_beamformer",
    "received_power",
    "verify_interference_budget",
]
