"""System parameters of the coexisting primary/secondary link model."""

import math
from typing import Annotated, Any, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.utils.errors import configuration_error
from src.utils.hashing import content_hash

# Feedback resolutions use None for "unquantized" (infinite bits).
Bits = Optional[Annotated[int, Field(ge=0)]]


def db_to_linear(value_db: float) -> float:
    """Convert a power ratio from dB to linear scale."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    """Convert a linear power ratio to dB."""
    return 10.0 * math.log10(value)


class SystemParams(BaseModel):
    """All scalar constants of the model.

    Defaults follow the reference setup: θ_p = θ_s = 3, λ = 0.1, σ² = 1,
    L = 4, γ_p = 10 dB, γ_max = 10 dB.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    antennas: int = Field(4, ge=3, description="SU transmit antennas L")
    path_loss: float = Field(0.1, gt=0.0, lt=1.0, description="SU->PU path-loss factor λ")
    sigma2: float = Field(1.0, gt=0.0, description="noise variance σ²")
    theta_p: float = Field(3.0, gt=0.0, description="PU SINR decode threshold")
    theta_s: float = Field(3.0, gt=0.0, description="SU SNR decode threshold")
    gamma_p: float = Field(10.0, gt=0.0, description="PU transmit SNR P_p/σ²")
    p_max: float = Field(10.0, gt=0.0, description="maximum SU transmit power")
    b_cdi: Bits = Field(12, description="CDI feedback bits B")
    a_ipc: Bits = Field(None, description="IPC feedback bits A")
    b_local: Bits = Field(None, description="local feedback/feedforward bits B'")

    @classmethod
    def create(cls, prefix: str = "", **values: Any) -> "SystemParams":
        """Validate values, raising ConfigurationError on failure."""
        try:
            return cls(**values)
        except ValidationError as exc:
            raise configuration_error(exc, prefix) from exc

    @classmethod
    def from_db(
        cls, gamma_p_db: float = 10.0, gamma_max_db: float = 10.0, **values: Any
    ) -> "SystemParams":
        """
        Build parameters with the PU SNR and maximum SU SNR given in dB.

        Args:
            gamma_p_db: PU transmit SNR γ_p in dB
            gamma_max_db: Maximum SU transmit SNR γ_max in dB
            **values: Remaining SystemParams fields

        Returns:
            Validated SystemParams
        """
        sigma2 = values.pop("sigma2", 1.0)
        return cls.create(
            gamma_p=db_to_linear(gamma_p_db),
            p_max=sigma2 * db_to_linear(gamma_max_db),
            sigma2=sigma2,
            **values,
        )

    @property
    def gamma_max(self) -> float:
        """Maximum SU transmit SNR γ_max = P_max/σ²."""
        return self.p_max / self.sigma2

    @property
    def total_bits(self) -> Optional[int]:
        """Cooperative feedback budget F = A + B (None if either is unquantized)."""
        if self.a_ipc is None or self.b_cdi is None:
            return None
        return self.a_ipc + self.b_cdi

    @property
    def cdi_radius(self) -> float:
        """Support edge 2^{-B/(L-1)} of the CDI quantization error."""
        if self.b_cdi is None:
            return 0.0
        return 2.0 ** (-self.b_cdi / (self.antennas - 1))

    def with_updates(self, **values: Any) -> "SystemParams":
        """Return a validated copy with some fields replaced."""
        return self.create(**{**self.model_dump(), **values})

    def fingerprint(self) -> str:
        """Short content hash identifying these parameters."""
        return content_hash(self.model_dump(mode="json"))
