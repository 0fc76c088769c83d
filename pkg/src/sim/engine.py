"""Monte Carlo outage engine.

A block of trials is simulated at once along a leading batch axis:
channels -> CDI quantization -> local quantization -> IPC -> beamformer ->
link metrics. Blocks are independent, so they are farmed out to a process
pool and the per-block counts summed in block order.
"""

from dataclasses import dataclass, field
from enum import Enum
from multiprocessing import Pool
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.analysis.outage import pu_outage_closed_form
from src.beamform import (
    BeamformerOutput,
    interference_power,
    nocb_beamformer,
    ocb_beamformer,
    received_power,
    verify_interference_budget,
)
from src.channel import ChannelRealization, SystemParams, linear_to_db, pu_sinr, sample_channels, su_snr
from src.feedback import (
    BeamformingMode,
    Branch,
    CdiQuantization,
    IpcCodebookSet,
    IpcSignal,
    compute_omega,
    decompose_cdi,
    get_codebook_cache,
    ipc_nocb,
    ipc_ocb_unquantized,
    quantize_ipc_ocb,
    quantize_local_cdi,
    rvq_codebook,
    rvq_select,
    sphere_cap_perturb,
)
from src.sim.rng import block_generator, block_layout, locate_trial
from src.utils.config import config
from src.utils.errors import CogfeedError, ConfigurationError, ResourceError, configuration_error
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

CI_SIGMAS = 3.0
FULL_POWER_RTOL = 1e-12


class CdiMode(str, Enum):
    """How the SU->PU direction is quantized."""

    STATISTICAL = "statistical"
    RVQ = "rvq"
    PERFECT = "perfect"


class TrialConfig(BaseModel):
    """One Monte Carlo configuration.

    IPC is quantized when ``params.a_ipc`` is set, local feedback when
    ``params.b_local`` is set.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    params: SystemParams = Field(default_factory=SystemParams)
    mode: BeamformingMode = BeamformingMode.OCB
    feedforward: bool = False
    cdi_mode: CdiMode = CdiMode.STATISTICAL
    n_trials: int = Field(100_000, ge=1)
    master_seed: int = Field(0, ge=0, lt=2**64)
    block_size: int = Field(default_factory=lambda: config.block_size, ge=1)
    codebook_samples: int = Field(default_factory=lambda: config.codebook_samples, ge=100_000)
    codebook_seed: int = Field(default_factory=lambda: config.codebook_seed, ge=0)

    @classmethod
    def create(cls, prefix: str = "", **values: Any) -> "TrialConfig":
        """Validate values, raising ConfigurationError on failure."""
        try:
            return cls(**values)
        except ValidationError as exc:
            raise configuration_error(exc, prefix) from exc

    def with_updates(self, **values: Any) -> "TrialConfig":
        return self.create(**{**dict(self), **values})

    def with_params(self, **values: Any) -> "TrialConfig":
        return self.with_updates(params=self.params.with_updates(**values))

    @property
    def ipc_quantized(self) -> bool:
        return self.params.a_ipc is not None

    def echo(self) -> Dict[str, Any]:
        """Flat config columns for result tables."""
        p = self.params
        return {
            "mode": self.mode.value,
            "feedforward": self.feedforward,
            "cdi_mode": self.cdi_mode.value,
            "antennas": p.antennas,
            "path_loss": p.path_loss,
            "sigma2": p.sigma2,
            "theta_p": p.theta_p,
            "theta_s": p.theta_s,
            "gamma_p_db": linear_to_db(p.gamma_p),
            "gamma_max_db": linear_to_db(p.gamma_max),
            "p_max": p.p_max,
            "b_cdi": p.b_cdi,
            "a_ipc": p.a_ipc,
            "b_local": p.b_local,
            "block_size": self.block_size,
            "codebook_samples": self.codebook_samples,
            "codebook_seed": self.codebook_seed,
        }


CONFIG_COLUMNS = [
    "mode",
    "feedforward",
    "cdi_mode",
    "antennas",
    "path_loss",
    "sigma2",
    "theta_p",
    "theta_s",
    "gamma_p_db",
    "gamma_max_db",
    "p_max",
    "b_cdi",
    "a_ipc",
    "b_local",
    "block_size",
    "codebook_samples",
    "codebook_seed",
]

RESULT_COLUMNS = [
    "su_outage",
    "pu_outage",
    "pu_outage_reference",
    "ci",
    "pu_ci",
    "mean_tx_power",
    "full_power_rate",
    "budget_violations",
    "branch_pu_outage",
    "branch_non_orthogonal",
    "branch_orthogonal",
    "trials",
    "seed",
]


@dataclass(frozen=True, eq=False)
class TrialRecord:
    """Outcome of one block-fading trial."""

    trial_index: int
    su_snr: float
    pu_sinr: float
    tx_power: float
    interference: float
    omega: float
    branch: Branch
    full_power: bool
    effective_gain: float
    budget_ok: bool
    f: np.ndarray = field(repr=False)
    h_x: np.ndarray = field(repr=False)
    h_s: np.ndarray = field(repr=False)


@dataclass
class BlockCounts:
    """Additive tallies over a set of trials."""

    trials: int = 0
    su_outages: int = 0
    pu_outages: int = 0
    tx_power_sum: float = 0.0
    full_power: int = 0
    budget_violations: int = 0
    branch_counts: Tuple[int, int, int] = (0, 0, 0)

    def __add__(self, other: "BlockCounts") -> "BlockCounts":
        return BlockCounts(
            trials=self.trials + other.trials,
            su_outages=self.su_outages + other.su_outages,
            pu_outages=self.pu_outages + other.pu_outages,
            tx_power_sum=self.tx_power_sum + other.tx_power_sum,
            full_power=self.full_power + other.full_power,
            budget_violations=self.budget_violations + other.budget_violations,
            branch_counts=tuple(a + b for a, b in zip(self.branch_counts, other.branch_counts)),
        )


@dataclass(frozen=True, eq=False)
class TrialBatch:
    """Every quantity of a simulated block, one row per trial."""

    params: SystemParams
    first_trial: int
    real: ChannelRealization
    cdi: CdiQuantization
    ipc: IpcSignal
    beam: BeamformerOutput
    omega: np.ndarray
    su_snr: np.ndarray
    pu_sinr: np.ndarray
    interference: np.ndarray
    budget_ok: np.ndarray

    def __len__(self) -> int:
        return len(self.su_snr)

    @property
    def tx_power(self) -> np.ndarray:
        return self.beam.power

    @property
    def su_outage(self) -> np.ndarray:
        """SNR_s ≤ θ_s."""
        return self.su_snr <= self.params.theta_s

    @property
    def pu_outage(self) -> np.ndarray:
        """SINR_p < θ_p."""
        return self.pu_sinr < self.params.theta_p

    @property
    def full_power(self) -> np.ndarray:
        return self.tx_power >= self.params.p_max * (1.0 - FULL_POWER_RTOL)

    @property
    def effective_gain(self) -> np.ndarray:
        """g_s·|f̂†s_s|² with f̂ = f/‖f‖; NaN for silent trials."""
        power = self.tx_power
        gain = self.real.g_s * received_power(self.beam.f, self.real.s_s)
        return np.divide(gain, power, out=np.full_like(power, np.nan), where=power > 0)

    def record(self, row: int) -> TrialRecord:
        return TrialRecord(
            trial_index=self.first_trial + row,
            su_snr=float(self.su_snr[row]),
            pu_sinr=float(self.pu_sinr[row]),
            tx_power=float(self.tx_power[row]),
            interference=float(self.interference[row]),
            omega=float(self.omega[row]),
            branch=Branch(int(self.ipc.branch[row])),
            full_power=bool(self.full_power[row]),
            effective_gain=float(self.effective_gain[row]),
            budget_ok=bool(self.budget_ok[row]),
            f=self.beam.f[row],
            h_x=self.real.h_x[row],
            h_s=self.real.h_s[row],
        )

    def counts(self, rows: Optional[int] = None) -> BlockCounts:
        """Tallies over the first ``rows`` trials."""
        rows = len(self) if rows is None else rows
        branch = np.asarray(self.ipc.branch[:rows])
        return BlockCounts(
            trials=rows,
            su_outages=int(np.count_nonzero(self.su_outage[:rows])),
            pu_outages=int(np.count_nonzero(self.pu_outage[:rows])),
            tx_power_sum=float(np.sum(self.tx_power[:rows])),
            full_power=int(np.count_nonzero(self.full_power[:rows])),
            budget_violations=int(np.count_nonzero(~self.budget_ok[:rows])),
            branch_counts=tuple(int(np.count_nonzero(branch == b)) for b in Branch),
        )


def resolve_codebooks(cfg: TrialConfig) -> Optional[IpcCodebookSet]:
    """Fetch (or build) the IPC codebooks a configuration needs; None for perfect IPC."""
    return get_codebook_cache().codebooks_for(
        cfg.params,
        cfg.mode,
        cfg.feedforward,
        n_samples=cfg.codebook_samples,
        seed=cfg.codebook_seed,
    )


def _check_codebooks(cfg: TrialConfig, codebooks: Optional[IpcCodebookSet]) -> None:
    if codebooks is None:
        return
    expected = cfg.params.fingerprint()
    for codebook in (codebooks.eta, codebooks.nu):
        if codebook is not None and codebook.params_hash != expected:
            raise ConfigurationError("codebook was built for different parameters", "codebooks")
    if cfg.mode is BeamformingMode.NOCB and codebooks.nu is None:
        raise ConfigurationError("NOCB needs a ν² codebook", "codebooks")
    if codebooks.eta.kind.feedforward != cfg.feedforward:
        raise ConfigurationError("codebook feedforward flag does not match", "codebooks")


def _quantize_direction(cfg: TrialConfig, s_x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    bits = cfg.params.b_cdi
    if cfg.cdi_mode is CdiMode.PERFECT:
        return s_x
    if cfg.cdi_mode is CdiMode.RVQ:
        if bits is None:
            raise ResourceError("RVQ needs a finite number of CDI bits")
        return rvq_select(s_x, rvq_codebook(bits, cfg.params.antennas, rng))
    s_hat_x, _ = sphere_cap_perturb(s_x, bits, rng)
    return s_hat_x


def simulate_block(
    cfg: TrialConfig, block_index: int, codebooks: Optional[IpcCodebookSet] = None
) -> TrialBatch:
    """
    Simulate one full RNG block of trials.

    Draw order within the block is fixed (channels, CDI quantization,
    local quantization) so that configurations sharing a seed see the
    same channels.

    Args:
        cfg: Trial configuration
        block_index: Block number; covers trials block_index*block_size onwards
        codebooks: IPC codebooks; resolved from the cache when IPC is
            quantized and none are given

    Returns:
        TrialBatch with cfg.block_size rows
    """
    if codebooks is None and cfg.ipc_quantized:
        codebooks = resolve_codebooks(cfg)
    _check_codebooks(cfg, codebooks)

    params = cfg.params
    rng = block_generator(cfg.master_seed, block_index)
    real = sample_channels(params, rng, size=cfg.block_size)
    s_hat_x = _quantize_direction(cfg, real.s_x, rng)
    s_s_known = quantize_local_cdi(real.s_s, params.b_local, rng)
    cdi = decompose_cdi(real.s_x, s_s_known, s_hat_x)
    omega = compute_omega(real.g_p, params)

    if cfg.mode is BeamformingMode.OCB:
        eta = ipc_ocb_unquantized(omega, real.g_x, cdi, params, cfg.feedforward)
        ipc = quantize_ipc_ocb(eta, codebooks.eta if codebooks else None, omega, params, cfg.feedforward)
        beam = ocb_beamformer(cdi, ipc)
    else:
        ipc = ipc_nocb(omega, real.g_x, cdi, codebooks, params, cfg.feedforward)
        beam = nocb_beamformer(cdi, ipc)

    return TrialBatch(
        params=params,
        first_trial=block_index * cfg.block_size,
        real=real,
        cdi=cdi,
        ipc=ipc,
        beam=beam,
        omega=omega,
        su_snr=su_snr(real, beam.f, params),
        pu_sinr=pu_sinr(real, beam.f, params),
        interference=interference_power(beam.f, real),
        budget_ok=verify_interference_budget(beam.f, real, omega),
    )


def run_trial(
    cfg: TrialConfig, trial_index: int, codebooks: Optional[IpcCodebookSet] = None
) -> TrialRecord:
    """
    Evaluate a single trial.

    The record is bit-identical to the trial's row inside any batch run
    with the same configuration.
    """
    block_index, row = locate_trial(trial_index, cfg.block_size)
    return simulate_block(cfg, block_index, codebooks).record(row)


@dataclass(frozen=True)
class OutageEstimate:
    """Aggregated Monte Carlo outage estimate."""

    su_outage: float
    pu_outage: float
    pu_outage_reference: float
    trials: int
    su_ci_halfwidth: float
    pu_ci_halfwidth: float
    mean_tx_power: float
    full_power_rate: float
    budget_violations: int
    branch_frequencies: Tuple[float, float, float]
    seed: int

    @classmethod
    def from_counts(cls, counts: BlockCounts, cfg: TrialConfig) -> "OutageEstimate":
        n = counts.trials
        su = counts.su_outages / n
        pu = counts.pu_outages / n
        return cls(
            su_outage=su,
            pu_outage=pu,
            pu_outage_reference=pu_outage_closed_form(cfg.params),
            trials=n,
            su_ci_halfwidth=binomial_halfwidth(su, n),
            pu_ci_halfwidth=binomial_halfwidth(pu, n),
            mean_tx_power=counts.tx_power_sum / n,
            full_power_rate=counts.full_power / n,
            budget_violations=counts.budget_violations,
            branch_frequencies=tuple(c / n for c in counts.branch_counts),
            seed=cfg.master_seed,
        )

    @property
    def su_sigma(self) -> float:
        return self.su_ci_halfwidth / CI_SIGMAS

    @property
    def pu_sigma(self) -> float:
        return self.pu_ci_halfwidth / CI_SIGMAS

    def as_row(self) -> Dict[str, Any]:
        return {
            "su_outage": self.su_outage,
            "pu_outage": self.pu_outage,
            "pu_outage_reference": self.pu_outage_reference,
            "ci": self.su_ci_halfwidth,
            "pu_ci": self.pu_ci_halfwidth,
            "mean_tx_power": self.mean_tx_power,
            "full_power_rate": self.full_power_rate,
            "budget_violations": self.budget_violations,
            "branch_pu_outage": self.branch_frequencies[Branch.PU_OUTAGE],
            "branch_non_orthogonal": self.branch_frequencies[Branch.NON_ORTHOGONAL],
            "branch_orthogonal": self.branch_frequencies[Branch.ORTHOGONAL],
            "trials": self.trials,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class PairedEstimate:
    """Two configurations evaluated on common random numbers.

    Attributes:
        first: Estimate for the first configuration
        second: Estimate for the second configuration
        difference: first.su_outage − second.su_outage
        halfwidth: 3σ of the paired difference
    """

    first: OutageEstimate
    second: OutageEstimate
    difference: float
    halfwidth: float

    @property
    def sigma(self) -> float:
        return self.halfwidth / CI_SIGMAS


def binomial_halfwidth(p: float, n: int) -> float:
    """3·√(p(1−p)/n)."""
    return CI_SIGMAS * float(np.sqrt(p * (1.0 - p) / n))


def _count_task(task) -> BlockCounts:
    cfg, block_index, rows, codebooks = task
    return simulate_block(cfg, block_index, codebooks).counts(rows)


def _paired_task(task) -> Tuple[BlockCounts, BlockCounts, float, float]:
    cfg_a, cfg_b, block_index, rows, codebooks_a, codebooks_b = task
    batch_a = simulate_block(cfg_a, block_index, codebooks_a)
    batch_b = simulate_block(cfg_b, block_index, codebooks_b)
    diff = batch_a.su_outage[:rows].astype(float) - batch_b.su_outage[:rows].astype(float)
    return batch_a.counts(rows), batch_b.counts(rows), float(diff.sum()), float(np.sum(diff**2))


def _map_blocks(fn: Callable, tasks: Sequence, workers: Optional[int], pool=None) -> List:
    # pool.map preserves task order, so sums are identical for any worker count.
    if pool is not None:
        return pool.map(fn, tasks)
    workers = config.workers if workers is None else workers
    if workers <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with Pool(processes=min(workers, len(tasks))) as local_pool:
        return local_pool.map(fn, tasks)


def _sum_counts(parts: Sequence[BlockCounts]) -> BlockCounts:
    total = BlockCounts()
    for part in parts:
        total = total + part
    return total


def estimate_outage(
    cfg: TrialConfig,
    workers: Optional[int] = None,
    codebooks: Optional[IpcCodebookSet] = None,
    pool=None,
) -> OutageEstimate:
    """
    Estimate SU and PU outage probabilities.

    Args:
        cfg: Trial configuration
        workers: Worker processes; defaults to config.workers
        codebooks: Prebuilt IPC codebooks; resolved from the cache if needed
        pool: Existing process pool to reuse

    Returns:
        OutageEstimate
    """
    if codebooks is None and cfg.ipc_quantized:
        codebooks = resolve_codebooks(cfg)
    _check_codebooks(cfg, codebooks)
    tasks = [(cfg, index, rows, codebooks) for index, rows in block_layout(cfg.n_trials, cfg.block_size)]
    counts = _sum_counts(_map_blocks(_count_task, tasks, workers, pool))
    logger.debug(f"Aggregated {len(tasks)} blocks ({counts.trials} trials)")
    return OutageEstimate.from_counts(counts, cfg)


def estimate_paired(
    cfg_a: TrialConfig, cfg_b: TrialConfig, workers: Optional[int] = None, pool=None
) -> PairedEstimate:
    """
    Compare the SU outage of two configurations on common random numbers.

    Both configurations must share n_trials, master_seed and block_size.

    Returns:
        PairedEstimate with a 3σ half-width of the paired difference
    """
    for name in ("n_trials", "master_seed", "block_size"):
        if getattr(cfg_a, name) != getattr(cfg_b, name):
            raise ConfigurationError("paired configurations must match", name)
    codebooks_a = resolve_codebooks(cfg_a) if cfg_a.ipc_quantized else None
    codebooks_b = resolve_codebooks(cfg_b) if cfg_b.ipc_quantized else None
    tasks = [
        (cfg_a, cfg_b, index, rows, codebooks_a, codebooks_b)
        for index, rows in block_layout(cfg_a.n_trials, cfg_a.block_size)
    ]
    parts = _map_blocks(_paired_task, tasks, workers, pool)
    counts_a = _sum_counts([part[0] for part in parts])
    counts_b = _sum_counts([part[1] for part in parts])
    n = counts_a.trials
    mean = sum(part[2] for part in parts) / n
    second_moment = sum(part[3] for part in parts) / n
    variance = max(second_moment - mean**2, 0.0)
    return PairedEstimate(
        first=OutageEstimate.from_counts(counts_a, cfg_a),
        second=OutageEstimate.from_counts(counts_b, cfg_b),
        difference=mean,
        halfwidth=CI_SIGMAS * float(np.sqrt(variance / n)),
    )


def _codebook_label(cfg: TrialConfig) -> str:
    if not cfg.ipc_quantized:
        return ""
    codebooks = resolve_codebooks(cfg)
    labels = [f"{kind}:{digest}" for kind, digest in sorted(codebooks.content_hashes().items())]
    if codebooks.eta.degenerate or (codebooks.nu is not None and codebooks.nu.degenerate):
        labels.append("degenerate")
    return ";".join(labels)


def sweep(grid: Sequence[TrialConfig], workers: Optional[int] = None) -> pd.DataFrame:
    """
    Estimate outage for every configuration of a grid.

    A failing row is recorded with its error message and the sweep
    continues.

    Args:
        grid: Configurations, evaluated in order
        workers: Worker processes; defaults to config.workers

    Returns:
        DataFrame with CONFIG_COLUMNS, RESULT_COLUMNS, codebooks and error
    """
    if not grid:
        raise ConfigurationError("sweep grid is empty", "grid")
    workers = config.workers if workers is None else workers
    pool = Pool(processes=workers) if workers > 1 else None
    rows = []
    try:
        for index, cfg in enumerate(grid):
            row: Dict[str, Any] = dict(cfg.echo())
            try:
                row["codebooks"] = _codebook_label(cfg)
                row.update(estimate_outage(cfg, workers=workers, pool=pool).as_row())
                row["error"] = ""
            except CogfeedError as exc:
                logger.warning(f"Sweep row {index} failed: {exc}")
                row.update({column: np.nan for column in RESULT_COLUMNS})
                row.update(trials=cfg.n_trials, seed=cfg.master_seed, codebooks="", error=str(exc))
            rows.append(row)
            logger.debug(f"Sweep row {index + 1}/{len(grid)} done")
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    return pd.DataFrame(rows, columns=CONFIG_COLUMNS + RESULT_COLUMNS + ["codebooks", "error"])
