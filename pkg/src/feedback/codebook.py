"""Equal-probability scalar codebooks for IPC feedback.

Levels p_0 = 0 < p_1 < ... < p_{N-1} are the empirical n/N quantiles of the
unquantized IPC signal conditioned on ω ≥ 0, so each cell carries
probability 1/N. Codebooks are built once, then immutable.
"""

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
import orjson

from src.channel.params import Bits, SystemParams
from src.feedback.ipc import BeamformingMode, eta_signal, nu_signal
from src.utils.errors import ConfigurationError, SamplingError
from src.utils.hashing import content_hash, dumps
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

MIN_CODEBOOK_SAMPLES = 100_000
MAX_SAMPLING_ROUNDS = 20


class CodebookKind(str, Enum):
    """Which IPC signal a codebook quantizes."""

    ETA = "eta"
    ETA_FF = "eta_ff"
    NU = "nu"
    NU_FF = "nu_ff"

    @property
    def feedforward(self) -> bool:
        return self in (CodebookKind.ETA_FF, CodebookKind.NU_FF)

    @property
    def is_nu(self) -> bool:
        return self in (CodebookKind.NU, CodebookKind.NU_FF)

    @classmethod
    def kinds_for(
        cls, mode: BeamformingMode, feedforward: bool
    ) -> Tuple["CodebookKind", Optional["CodebookKind"]]:
        """Codebook kinds needed by a beamforming mode: (η kind, ν² kind or None)."""
        eta = cls.ETA_FF if feedforward else cls.ETA
        if BeamformingMode(mode) is BeamformingMode.OCB:
            return eta, None
        return eta, cls.NU_FF if feedforward else cls.NU


@dataclass(frozen=True, eq=False)
class IpcCodebook:
    """Quantizer set for one IPC signal.

    Attributes:
        levels: Strictly increasing levels with levels[0] = 0
        kind: Signal quantized by this codebook
        a_bits: IPC bits A
        b_bits: CDI bits B the codebook was built for
        p_max: Power cap P_max
        params_hash: Fingerprint of the SystemParams used
        n_samples: Requested conditional samples
        seed: Seed of the sampling stream
        accepted: Samples that survived conditioning
        degenerate: True for the single-level {0} fallback
    """

    levels: np.ndarray
    kind: CodebookKind
    a_bits: int
    b_bits: Bits
    p_max: float
    params_hash: str
    n_samples: int
    seed: int
    accepted: int
    degenerate: bool = False

    def __post_init__(self):
        levels = np.asarray(self.levels, dtype=float)
        if levels.ndim != 1 or levels.size == 0 or levels[0] != 0.0:
            raise ConfigurationError("codebook levels must start at 0", "levels")
        if not np.all(np.isfinite(levels)) or np.any(np.diff(levels) <= 0):
            raise ConfigurationError("codebook levels must be finite and strictly increasing", "levels")
        if not self.degenerate and levels.size != 2**self.a_bits:
            raise ConfigurationError(
                f"expected {2**self.a_bits} levels, got {levels.size}", "levels"
            )
        object.__setattr__(self, "levels", levels)

    @property
    def n_levels(self) -> int:
        """N = 2^A (1 for a degenerate codebook)."""
        return int(self.levels.size)

    @property
    def levels_above_cap(self) -> int:
        """Number of levels strictly above P_max."""
        return int(np.sum(self.levels > self.p_max))

    def floor(self, values) -> Tuple[np.ndarray, np.ndarray]:
        """
        Floor operator: largest level not above each value.

        Args:
            values: Non-negative values (+inf allowed)

        Returns:
            Tuple of (floored values, level indices)
        """
        values = np.asarray(values, dtype=float)
        index = np.searchsorted(self.levels, values, side="right") - 1
        index = np.clip(index, 0, self.n_levels - 1)
        return self.levels[index], index

    def to_document(self) -> Dict[str, Any]:
        """JSON-ready document describing the codebook."""
        return {
            "mode": self.kind.value,
            "A": self.a_bits,
            "B": self.b_bits,
            "params_hash": self.params_hash,
            "levels": self.levels.tolist(),
            "n_samples": self.n_samples,
            "seed": self.seed,
            "accepted": self.accepted,
            "degenerate": self.degenerate,
            "p_max": self.p_max,
        }

    @classmethod
    def from_document(cls, doc: Dict[str, Any]) -> "IpcCodebook":
        return cls(
            levels=np.asarray(doc["levels"], dtype=float),
            kind=CodebookKind(doc["mode"]),
            a_bits=int(doc["A"]),
            b_bits=doc["B"],
            p_max=float(doc["p_max"]),
            params_hash=doc["params_hash"],
            n_samples=int(doc["n_samples"]),
            seed=int(doc["seed"]),
            accepted=int(doc.get("accepted", doc["n_samples"])),
            degenerate=bool(doc.get("degenerate", False)),
        )

    def to_json(self) -> bytes:
        return dumps(self.to_document(), indent=True)

    @classmethod
    def from_json(cls, data: Union[bytes, str]) -> "IpcCodebook":
        return cls.from_document(orjson.loads(data))

    def save(self, path: Union[str, Path]) -> Path:
        """Write the codebook document to path."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(self.to_json())
        logger.info(f"Codebook {self.kind.value} (A={self.a_bits}) written to {path}")
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "IpcCodebook":
        return cls.from_json(Path(path).read_bytes())

    def content_hash(self) -> str:
        """Hash of the serialized document."""
        return content_hash(self.to_document())

    @classmethod
    def degenerate_for(
        cls, params: SystemParams, kind: CodebookKind, a_bits: int, n_samples: int, seed: int, accepted: int = 0
    ) -> "IpcCodebook":
        """Single-level {0} codebook; flooring to 0 never exceeds the interference budget."""
        return cls(
            levels=np.zeros(1),
            kind=kind,
            a_bits=a_bits,
            b_bits=params.b_cdi,
            p_max=params.p_max,
            params_hash=params.fingerprint(),
            n_samples=n_samples,
            seed=seed,
            accepted=accepted,
            degenerate=True,
        )


@dataclass(frozen=True)
class IpcCodebookSet:
    """Codebooks used by one beamforming mode: η always, ν² for NOCB."""

    eta: IpcCodebook
    nu: Optional[IpcCodebook] = None

    def content_hashes(self) -> Dict[str, str]:
        hashes = {self.eta.kind.value: self.eta.content_hash()}
        if self.nu is not None:
            hashes[self.nu.kind.value] = self.nu.content_hash()
        return hashes


def sample_conditional_signal(
    params: SystemParams, kind: CodebookKind, n: int, rng: np.random.Generator
) -> np.ndarray:
    """
    Draw unquantized IPC signal values conditioned on ω ≥ 0.

    g_p given γ_p·g_p ≥ θ_p is θ_p/γ_p + Exp(1) (memoryless), g_x ~ Gamma(L),
    ε follows the sphere-cap law and δ = κ·ε with κ ~ Beta(1, L-2).
    ν kinds return ν² and NaN where ν < 0; non-finite values are left in
    place for the caller to drop.

    Args:
        params: System parameters
        kind: Signal to sample
        n: Number of draws
        rng: Random generator

    Returns:
        Array of n signal values
    """
    dim = params.antennas
    g_p = params.theta_p / params.gamma_p + rng.exponential(1.0, size=n)
    g_x = rng.gamma(dim, 1.0, size=n)
    epsilon = params.cdi_radius * rng.random(n) ** (1.0 / (dim - 1))
    delta = rng.beta(1.0, dim - 2.0, size=n) * epsilon
    omega = params.sigma2 * (params.gamma_p * g_p / params.theta_p - 1.0)
    error = delta if kind.feedforward else epsilon

    if not kind.is_nu:
        return eta_signal(omega, g_x, error, params)
    nu = nu_signal(omega, g_x, epsilon, error, params)
    with np.errstate(invalid="ignore"):
        return np.where(nu >= 0, nu**2, np.nan)


def _strictly_increasing(levels: np.ndarray) -> np.ndarray:
    for k in range(1, levels.size):
        if levels[k] <= levels[k - 1]:
            levels[k] = np.nextafter(levels[k - 1], np.inf)
    return levels


def build_ipc_codebook(
    params: SystemParams,
    kind: CodebookKind,
    n_samples: int,
    rng: np.random.Generator,
    a_bits: Optional[int] = None,
    seed: int = -1,
) -> IpcCodebook:
    """
    Build an equal-probability IPC codebook from conditional samples.

    Args:
        params: System parameters
        kind: Signal to quantize
        n_samples: Conditional samples to collect (at least 100000)
        rng: Random generator for the sampling phase
        a_bits: IPC bits A; defaults to params.a_ipc
        seed: Seed recorded in the codebook document

    Returns:
        IpcCodebook with 2^A levels

    Raises:
        ConfigurationError: If A < 1 or n_samples is too small
        SamplingError: If fewer than n_samples/10 draws survive conditioning
    """
    a_bits = params.a_ipc if a_bits is None else a_bits
    if a_bits is None or a_bits < 1:
        raise ConfigurationError("IPC codebook needs A >= 1", "a_ipc")
    if n_samples < MIN_CODEBOOK_SAMPLES:
        raise ConfigurationError(
            f"n_samples must be at least {MIN_CODEBOOK_SAMPLES}", "codebook_samples"
        )

    kept = []
    accepted = 0
    for _ in range(MAX_SAMPLING_ROUNDS if kind.is_nu else 1):
        draws = sample_conditional_signal(params, kind, n_samples, rng)
        draws = draws[np.isfinite(draws)]
        kept.append(draws)
        accepted += draws.size
        if accepted >= n_samples:
            break
    if accepted < n_samples / 10:
        raise SamplingError(
            f"only {accepted} of {n_samples} conditional samples accepted for {kind.value}"
        )
    samples = np.concatenate(kept)[:n_samples]

    n_levels = 2**a_bits
    interior = np.quantile(samples, np.arange(1, n_levels) / n_levels)
    levels = _strictly_increasing(np.concatenate([[0.0], np.maximum(interior, 0.0)]))
    codebook = IpcCodebook(
        levels=levels,
        kind=kind,
        a_bits=a_bits,
        b_bits=params.b_cdi,
        p_max=params.p_max,
        params_hash=params.fingerprint(),
        n_samples=n_samples,
        seed=seed,
        accepted=int(samples.size),
    )
    if codebook.levels_above_cap > 2:
        logger.warning(
            f"{codebook.levels_above_cap} of {n_levels} {kind.value} levels exceed P_max={params.p_max:g}"
        )
    logger.info(f"Built {kind.value} codebook: A={a_bits}, B={params.b_cdi}, samples={samples.size}")
    return codebook


def ipc_power_loss_bound(codebook: IpcCodebook, params: SystemParams) -> float:
    """
    Worst-case power lost to IPC quantization below P_max.

    ΔP = max_{1 ≤ n ≤ n0} (p_n − p_{n−1}) where n0 is the first index with
    p_{n0−1} ≤ P_max ≤ p_{n0} (N−1 when no level reaches P_max).
    """
    levels = codebook.levels
    if levels.size < 2:
        return float(params.p_max)
    reaching = np.nonzero(levels[1:] >= params.p_max)[0]
    n0 = int(reaching[0]) + 1 if reaching.size else levels.size - 1
    return float(np.max(np.diff(levels[: n0 + 1])))
