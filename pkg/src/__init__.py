"""cogfeed - cognitive beamforming with finite-rate cooperative feedback."""

__version__ = "0.1.0"
