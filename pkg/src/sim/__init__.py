"""Monte Carlo outage engine and distribution checks."""

from src.sim.engine import (
    CONFIG_COLUMNS,
    RESULT_COLUMNS,
    BlockCounts,
    CdiMode,
    OutageEstimate,
    PairedEstimate,
    TrialBatch,
    TrialConfig,
    TrialRecord,
    binomial_halfwidth,
    estimate_outage,
    estimate_paired,
    resolve_codebooks,
    run_trial,
    simulate_block,
    sweep,
)
from src.sim.rng import block_generator, block_layout, locate_trial
from src.sim.validation import KS_COLUMNS, distribution_checks, sample_distribution_quantities

__all__ = [
    "CONFIG_COLUMNS",
    "KS_COLUMNS",
    "RESULT_COLUMNS",
    "BlockCounts",
    "CdiMode",
    "OutageEstimate",
    "PairedEstimate",
    "TrialBatch",
    "TrialConfig",
    "TrialRecord",
    "binomial_halfwidth",
    "block_generator",
    "block_layout",
    "distribution_checks",
    "estimate_outage",
    "estimate_paired",
    "locate_trial",
    "resolve_codebooks",
    "run_trial",
    "sample_distribution_quantities",
    "simulate_block",
    "sweep",
]
