"""Kolmogorov-Smirnov checks of sampled quantities against their closed-form laws."""

from typing import Dict, List

import numpy as np
import pandas as pd
from scipy import stats

from src.analysis.distributions import delta_cdf, effective_gain_cdf, epsilon_cdf, kappa_survival
from src.channel import SystemParams, sample_channels
from src.feedback import quantize_cdi_statistical
from src.utils.errors import ConfigurationError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

KS_COLUMNS = ["quantity", "law", "samples", "ks_statistic", "p_value", "passed"]
KS_ALPHA = 0.01


def sample_distribution_quantities(
    params: SystemParams, n_samples: int, rng: np.random.Generator
) -> Dict[str, np.ndarray]:
    """
    Draw g_x, ε, δ, κ = δ/ε and the OCB effective gain g̃_s.

    The effective gain is g_s·|ŝ_⊥†s_s|², the SU channel power seen through
    the unit OCB beam.
    """
    real = sample_channels(params, rng, size=n_samples)
    cdi = quantize_cdi_statistical(real.s_x, real.s_s, params.b_cdi, rng)
    return {
        "g_x": real.g_x,
        "epsilon": cdi.epsilon,
        "delta": cdi.delta,
        "kappa": cdi.kappa,
        "effective_gain": real.g_s * np.abs(cdi.b) ** 2,
    }


def distribution_checks(params: SystemParams, n_samples: int = 100_000, seed: int = 0) -> pd.DataFrame:
    """
    KS table for the sampled channel and quantization-error laws.

    Args:
        params: System parameters; b_cdi must be finite
        n_samples: Samples per quantity
        seed: Generator seed

    Returns:
        DataFrame with KS_COLUMNS, one row per quantity
    """
    if params.b_cdi is None:
        raise ConfigurationError("distribution checks need finite CDI bits", "b_cdi")
    dim = params.antennas
    bits = params.b_cdi
    laws: Dict[str, tuple] = {
        "g_x": ("Gamma(L)", lambda x: stats.gamma.cdf(x, dim)),
        "epsilon": ("2^B tau^(L-1)", lambda x: epsilon_cdf(x, dim, bits)),
        "delta": ("1 - 2^B (r - tau)^(L-1)", lambda x: delta_cdf(x, dim, bits)),
        "kappa": ("1 - (1 - tau)^(L-2)", lambda x: 1.0 - kappa_survival(x, dim)),
        "effective_gain": ("chi-square, L-1 complex dof", lambda x: effective_gain_cdf(x, dim)),
    }

    samples = sample_distribution_quantities(params, n_samples, np.random.default_rng(seed))
    rows: List[dict] = []
    for quantity, (law, cdf) in laws.items():
        result = stats.kstest(samples[quantity], cdf)
        rows.append(
            {
                "quantity": quantity,
                "law": law,
                "samples": n_samples,
                "ks_statistic": float(result.statistic),
                "p_value": float(result.pvalue),
                "passed": bool(result.pvalue > KS_ALPHA),
            }
        )
    table = pd.DataFrame(rows, columns=KS_COLUMNS)
    failed = table.loc[~table["passed"], "quantity"].tolist()
    if failed:
        logger.warning(f"KS checks below p={KS_ALPHA}: {', '.join(failed)}")
    return table
