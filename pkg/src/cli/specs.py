"""Declarative experiment specifications loaded from JSON."""

import itertools
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import orjson
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.channel.params import Bits, SystemParams
from src.feedback import BeamformingMode
from src.sim import CdiMode, TrialConfig
from src.utils.config import config
from src.utils.errors import ConfigurationError, configuration_error

GAMMA_MAX_SWEEP_DB = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0]


class ExperimentKind(str, Enum):
    FIGURE2 = "figure2"
    FIGURE3 = "figure3"
    FIGURE4 = "figure4"
    FIGURE5 = "figure5"
    FIGURE6 = "figure6"
    VALIDATE_DISTRIBUTIONS = "validate-distributions"
    ALLOCATE_BITS = "allocate-bits"
    CUSTOM_SWEEP = "custom-sweep"


class ParamOverrides(BaseModel):
    """Partial system parameters; SNRs in dB, thresholds linear.

    Unset fields keep the defaults, so ``perfect_cdi`` is how a spec asks
    for unquantized CDI (B = ∞).
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    antennas: Optional[int] = Field(None, ge=3)
    path_loss: Optional[float] = Field(None, gt=0.0, lt=1.0)
    sigma2: Optional[float] = Field(None, gt=0.0)
    theta_p: Optional[float] = Field(None, gt=0.0)
    theta_s: Optional[float] = Field(None, gt=0.0)
    gamma_p_db: Optional[float] = None
    gamma_max_db: Optional[float] = None
    b_cdi: Bits = None
    a_ipc: Bits = None
    b_local: Bits = None
    perfect_cdi: bool = False

    @model_validator(mode="after")
    def _check_cdi(self) -> "ParamOverrides":
        if self.perfect_cdi and self.b_cdi is not None:
            raise ValueError("perfect_cdi excludes b_cdi")
        return self

    def to_params(self, prefix: str = "overrides") -> SystemParams:
        """Apply the overrides on top of the default parameters."""
        values = self.model_dump(exclude_none=True)
        if values.pop("perfect_cdi"):
            values["b_cdi"] = None
        gamma_p_db = values.pop("gamma_p_db", 10.0)
        gamma_max_db = values.pop("gamma_max_db", 10.0)
        try:
            return SystemParams.from_db(gamma_p_db=gamma_p_db, gamma_max_db=gamma_max_db, **values)
        except ConfigurationError as exc:
            raise ConfigurationError(str(exc), f"{prefix}.{exc.field_path}" if exc.field_path else prefix) from exc


class SweepGrid(BaseModel):
    """Sweep axes; unset axes fall back to the experiment kind's defaults.

    ``b_cdi`` and ``a_ipc`` lists may contain null for unquantized feedback.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    gamma_max_db: Optional[List[float]] = None
    b_cdi: Optional[List[Bits]] = None
    a_ipc: Optional[List[Bits]] = None
    b_local: Optional[List[Bits]] = None
    antennas: Optional[List[int]] = None
    modes: Optional[List[BeamformingMode]] = None
    feedforward: Optional[List[bool]] = None


# Kind defaults; an empty list of a_ipc/b_cdi keeps the override value.
KIND_GRIDS: Dict[ExperimentKind, Dict[str, List[Any]]] = {
    ExperimentKind.FIGURE2: {"b_cdi": [8, 12, 16, 20], "modes": [BeamformingMode.OCB], "feedforward": [False]},
    ExperimentKind.FIGURE3: {
        "b_cdi": [8, 16],
        "modes": [BeamformingMode.OCB, BeamformingMode.NOCB],
        "feedforward": [False],
    },
    ExperimentKind.FIGURE4: {
        "b_cdi": [12],
        "antennas": [4, 6],
        "modes": [BeamformingMode.OCB, BeamformingMode.NOCB],
        "feedforward": [False, True],
    },
    ExperimentKind.FIGURE5: {
        "b_cdi": [12],
        "b_local": [None, 8],
        "modes": [BeamformingMode.OCB, BeamformingMode.NOCB],
        "feedforward": [True],
    },
    ExperimentKind.FIGURE6: {
        "gamma_max_db": [10.0, 20.0, 30.0],
        "modes": [BeamformingMode.OCB],
        "feedforward": [False],
    },
    ExperimentKind.CUSTOM_SWEEP: {},
}


class ExperimentSpec(BaseModel):
    """One experiment run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = Field(..., min_length=1)
    kind: ExperimentKind
    overrides: ParamOverrides = Field(default_factory=ParamOverrides)
    grid: SweepGrid = Field(default_factory=SweepGrid)
    n_trials: int = Field(100_000, ge=1)
    master_seed: int = Field(0, ge=0, lt=2**64)
    output_path: Optional[Path] = None
    cdi_mode: CdiMode = CdiMode.STATISTICAL
    total_bits: int = Field(12, ge=1)
    empirical: bool = False
    validation_samples: int = Field(100_000, ge=1000)
    codebook_samples: int = Field(default_factory=lambda: config.codebook_samples, ge=100_000)
    codebook_seed: int = Field(default_factory=lambda: config.codebook_seed, ge=0)

    @classmethod
    def create(cls, **values: Any) -> "ExperimentSpec":
        """Validate values, raising ConfigurationError with the field path."""
        try:
            return cls(**values)
        except ValidationError as exc:
            raise configuration_error(exc) from exc

    @classmethod
    def from_json(cls, data: Union[bytes, str]) -> "ExperimentSpec":
        try:
            document = orjson.loads(data)
        except orjson.JSONDecodeError as exc:
            raise ConfigurationError(f"invalid JSON: {exc}") from exc
        if not isinstance(document, dict):
            raise ConfigurationError("experiment spec must be a JSON object")
        return cls.create(**document)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ExperimentSpec":
        return cls.from_json(Path(path).read_bytes())

    def with_updates(self, **values: Any) -> "ExperimentSpec":
        return self.create(**{**dict(self), **values})

    def document(self) -> Dict[str, Any]:
        """JSON-ready echo of the spec."""
        return self.model_dump(mode="json")

    def base_params(self) -> SystemParams:
        return self.overrides.to_params()

    def axis(self, name: str) -> List[Any]:
        """Sweep values of one axis: explicit grid, then kind default, then the override."""
        explicit = getattr(self.grid, name)
        if explicit is not None:
            return list(explicit)
        defaults = KIND_GRIDS.get(self.kind, {})
        if name in defaults:
            return list(defaults[name])
        if name == "gamma_max_db":
            return list(GAMMA_MAX_SWEEP_DB) if self.overrides.gamma_max_db is None else [self.overrides.gamma_max_db]
        if name == "modes":
            return [BeamformingMode.OCB]
        if name == "feedforward":
            return [False]
        return [getattr(self.base_params(), name)]

    def _trial(self, params: SystemParams, mode: BeamformingMode, feedforward: bool) -> TrialConfig:
        return TrialConfig.create(
            prefix="grid",
            params=params,
            mode=mode,
            feedforward=feedforward,
            cdi_mode=self.cdi_mode,
            n_trials=self.n_trials,
            master_seed=self.master_seed,
            codebook_samples=self.codebook_samples,
            codebook_seed=self.codebook_seed,
        )

    def trial_grid(self) -> List[TrialConfig]:
        """
        Expand the spec into Monte Carlo configurations.

        figure6 pairs each A with B = total_bits − A instead of crossing
        the two axes.
        """
        if self.kind in (ExperimentKind.VALIDATE_DISTRIBUTIONS, ExperimentKind.ALLOCATE_BITS):
            return []
        base = self.base_params()
        gamma_p_db = 10.0 if self.overrides.gamma_p_db is None else self.overrides.gamma_p_db

        if self.kind is ExperimentKind.FIGURE6:
            a_values = self.grid.a_ipc or list(range(1, self.total_bits))
            bit_pairs = [(a, self.total_bits - a) for a in a_values]
        else:
            bit_pairs = list(itertools.product(self.axis("a_ipc"), self.axis("b_cdi")))

        grid: List[TrialConfig] = []
        for antennas, b_local, gamma_max_db, (a_bits, b_bits), mode, feedforward in itertools.product(
            self.axis("antennas"),
            self.axis("b_local"),
            self.axis("gamma_max_db"),
            bit_pairs,
            self.axis("modes"),
            self.axis("feedforward"),
        ):
            params = SystemParams.from_db(
                gamma_p_db=gamma_p_db,
                gamma_max_db=gamma_max_db,
                **{
                    **base.model_dump(exclude={"gamma_p", "p_max"}),
                    "antennas": antennas,
                    "b_local": b_local,
                    "a_ipc": a_bits,
                    "b_cdi": b_bits,
                },
            )
            grid.append(self._trial(params, BeamformingMode(mode), feedforward))
        if not grid:
            raise ConfigurationError("experiment grid is empty", "grid")
        return grid
