"""Shared fixtures."""

import numpy as np
import pytest

from src.channel import SystemParams
from src.feedback import get_codebook_cache


@pytest.fixture
def rng():
    """Seeded generator."""
    return np.random.default_rng(1234)


@pytest.fixture
def params():
    """Default system: L = 4, λ = 0.1, θ = 3, γ_p = γ_max = 10 dB, B = 12."""
    return SystemParams()


@pytest.fixture
def quantized_params():
    """Default system with A = 4 IPC bits and B = 8 CDI bits."""
    return SystemParams(b_cdi=8, a_ipc=4)


@pytest.fixture(autouse=True)
def fresh_codebook_cache():
    """Start every test from an empty codebook cache."""
    get_codebook_cache(force_reload=True)
    yield
    get_codebook_cache(force_reload=True)
