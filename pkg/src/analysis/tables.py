"""Tabulation of the closed-form results for CSV export."""

from typing import Any, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from src.analysis.allocation import lemma6_delta_p
from src.analysis.distributions import exact_su_outage_ocb
from src.analysis.outage import (
    AnalyticOutage,
    corollary1_asymptote,
    corollary3_asymptote,
    prop2_upper_bound,
    pu_outage_closed_form,
    theorem1_su_outage,
    theorem2_su_outage_ff,
)
from src.channel.params import SystemParams, linear_to_db
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

FORMULA_COLUMNS = [
    "antennas",
    "path_loss",
    "theta_p",
    "theta_s",
    "gamma_p_db",
    "gamma_max_db",
    "b_cdi",
    "a_ipc",
    "formula",
    "value",
    "raw_value",
    "baseline",
    "cdi_penalty",
    "ipc_penalty",
    "lower_bound",
    "regime",
    "validity_ratio",
    "valid",
]


def _row(params: SystemParams, formula: str, result: Any) -> Dict[str, Any]:
    row = {
        "antennas": params.antennas,
        "path_loss": params.path_loss,
        "theta_p": params.theta_p,
        "theta_s": params.theta_s,
        "gamma_p_db": linear_to_db(params.gamma_p),
        "gamma_max_db": linear_to_db(params.gamma_max),
        "b_cdi": params.b_cdi,
        "a_ipc": params.a_ipc,
        "formula": formula,
    }
    if isinstance(result, AnalyticOutage):
        row.update(
            value=result.value,
            raw_value=result.raw_value,
            lower_bound=np.nan if result.lower_bound is None else result.lower_bound,
            regime=result.regime.value,
            validity_ratio=result.validity_ratio,
            valid=result.valid,
            **result.first_order_terms,
        )
    else:
        row.update(
            value=float(result),
            raw_value=float(result),
            baseline=np.nan,
            cdi_penalty=np.nan,
            ipc_penalty=np.nan,
            lower_bound=np.nan,
            regime="exact",
            validity_ratio=0.0,
            valid=True,
        )
    return row


def formula_rows(params: SystemParams) -> List[Dict[str, Any]]:
    """Every applicable closed form at one parameter point."""
    rows = [
        _row(params, "pu_outage", pu_outage_closed_form(params)),
        _row(params, "theorem1", theorem1_su_outage(params)),
        _row(params, "theorem2", theorem2_su_outage_ff(params)),
        _row(params, "corollary1", corollary1_asymptote(params)),
    ]
    if params.b_cdi is not None:
        rows.append(_row(params, "exact_ocb", exact_su_outage_ocb(params)))
        rows.append(_row(params, "exact_ocb_ff", exact_su_outage_ocb(params, feedforward=True)))
    if params.a_ipc is not None:
        rows.append(_row(params, "prop2", prop2_upper_bound(params)))
        rows.append(_row(params, "prop2_ff", prop2_upper_bound(params, feedforward=True)))
        rows.append(_row(params, "corollary3", corollary3_asymptote(params)))
        if params.b_cdi is not None:
            rows.append(_row(params, "delta_p", lemma6_delta_p(params, params.a_ipc, params.b_cdi)))
    return rows


def formula_table(
    params: SystemParams,
    b_values: Iterable[Optional[int]] = (None,),
    a_values: Iterable[Optional[int]] = (None,),
) -> pd.DataFrame:
    """
    Evaluate the closed forms over a grid of (B, A).

    Args:
        params: Base parameters; None entries keep the base value
        b_values: CDI bit counts
        a_values: IPC bit counts

    Returns:
        DataFrame with FORMULA_COLUMNS, one row per (B, A, formula)
    """
    rows: List[Dict[str, Any]] = []
    for b_bits in b_values:
        for a_bits in a_values:
            point = params.with_updates(
                b_cdi=params.b_cdi if b_bits is None else b_bits,
                a_ipc=params.a_ipc if a_bits is None else a_bits,
            )
            rows.extend(formula_rows(point))
    table = pd.DataFrame(rows, columns=FORMULA_COLUMNS)
    flagged = int((~table["valid"].astype(bool)).sum())
    if flagged:
        logger.warning(f"{flagged} of {len(table)} formula values outside first-order validity")
    return table
