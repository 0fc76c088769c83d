"""Closed-form outage analysis and feedback bit allocation."""

from src.analysis.allocation import BitAllocation, j_function, lemma6_delta_p, optimal_bit_allocation
from src.analysis.distributions import (
    PowerLaws,
    delta_cdf,
    delta_pdf,
    effective_gain_cdf,
    effective_gain_pdf,
    epsilon_cdf,
    exact_su_outage_ocb,
    kappa_survival,
    lemma_distributions,
)
from src.analysis.outage import (
    VALIDITY_THRESHOLD,
    AnalyticOutage,
    Regime,
    baseline_outage,
    cdi_scale,
    chi,
    corollary1_asymptote,
    corollary3_asymptote,
    ipc_penalty_coeff,
    ipc_scale,
    phi,
    phi_asymptotic,
    prop2_upper_bound,
    pu_outage_closed_form,
    theorem1_su_outage,
    theorem2_su_outage_ff,
)
from src.analysis.tables import FORMULA_COLUMNS, formula_rows, formula_table

__all__ = [
    "FORMULA_COLUMNS",
    "VALIDITY_THRESHOLD",
    "AnalyticOutage",
    "BitAllocation",
    "PowerLaws",
    "Regime",
    "baseline_outage",
    "cdi_scale",
    "chi",
    "corollary1_asymptote",
    "corollary3_asymptote",
    "delta_cdf",
    "delta_pdf",
    "effective_gain_cdf",
    "effective_gain_pdf",
    "epsilon_cdf",
    "exact_su_outage_ocb",
    "formula_rows",
    "formula_table",
    "ipc_penalty_coeff",
    "ipc_scale",
    "j_function",
    "kappa_survival",
    "lemma6_delta_p",
    "lemma_distributions",
    "optimal_bit_allocation",
    "phi",
    "phi_asymptotic",
    "prop2_upper_bound",
    "pu_outage_closed_form",
    "theorem1_su_outage",
    "theorem2_su_outage_ff",
]
