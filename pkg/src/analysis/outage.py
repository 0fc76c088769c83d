"""First-order closed-form SU/PU outage probabilities for OCB.

All formulas keep the leading 2^{-B/(L-1)} term and drop the
O(2^{-2B/(L-1)}) remainder. Each result carries a validity indicator: the
ratio of the dropped scale to the kept penalty, flagged above
VALIDITY_THRESHOLD.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional

from src.channel.params import Bits, SystemParams
from src.mathkit import gamma_function, regularized_upper_gamma, upper_incomplete_gamma

VALIDITY_THRESHOLD = 0.1


class Regime(str, Enum):
    FINITE = "finite"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class AnalyticOutage:
    """Closed-form outage value with its first-order breakdown.

    Attributes:
        value: Probability clamped to [0, 1]
        raw_value: Unclamped first-order value
        baseline: Outage with perfect feedback
        cdi_penalty: Increment from CDI quantization
        ipc_penalty: Increment from IPC quantization
        regime: Finite P_max or P_max -> inf limit
        validity_ratio: 2^{-2B/(L-1)} over the first-order penalty
        lower_bound: Strict lower bound, when the formula has one
    """

    value: float
    raw_value: float
    baseline: float
    cdi_penalty: float
    ipc_penalty: float = 0.0
    regime: Regime = Regime.FINITE
    validity_ratio: float = 0.0
    lower_bound: Optional[float] = None

    @property
    def first_order_terms(self) -> Dict[str, float]:
        return {
            "baseline": self.baseline,
            "cdi_penalty": self.cdi_penalty,
            "ipc_penalty": self.ipc_penalty,
        }

    @property
    def valid(self) -> bool:
        """False when the first-order truncation is not trustworthy."""
        in_range = 0.0 <= self.raw_value <= 1.0
        return in_range and self.validity_ratio <= VALIDITY_THRESHOLD


def _outage(
    baseline: float,
    cdi_penalty: float,
    ipc_penalty: float,
    b_bits: Bits,
    params: SystemParams,
    regime: Regime = Regime.FINITE,
    lower_bound: Optional[float] = None,
) -> AnalyticOutage:
    raw = baseline + cdi_penalty + ipc_penalty
    penalty = cdi_penalty + ipc_penalty
    ratio = 0.0
    if b_bits is not None and penalty > 0:
        ratio = cdi_scale(params.antennas, b_bits) ** 2 / penalty
    return AnalyticOutage(
        value=min(max(raw, 0.0), 1.0),
        raw_value=raw,
        baseline=baseline,
        cdi_penalty=cdi_penalty,
        ipc_penalty=ipc_penalty,
        regime=regime,
        validity_ratio=ratio,
        lower_bound=lower_bound,
    )


def cdi_scale(antennas: int, b_bits: Bits) -> float:
    """2^{-B/(L-1)}; zero for unquantized CDI."""
    if b_bits is None:
        return 0.0
    return 2.0 ** (-b_bits / (antennas - 1))


def ipc_scale(a_bits: Bits) -> float:
    """2^{-A}; zero for unquantized IPC."""
    if a_bits is None:
        return 0.0
    return 2.0 ** (-a_bits)


def _pu_survival(params: SystemParams) -> float:
    return math.exp(-params.theta_p / params.gamma_p)


def _snr_edge(params: SystemParams) -> float:
    return params.theta_s / params.gamma_max


def pu_outage_closed_form(params: SystemParams) -> float:
    """PU outage 1 − e^{−θ_p/γ_p}; unchanged by SU transmission."""
    return -math.expm1(-params.theta_p / params.gamma_p)


def baseline_outage(params: SystemParams) -> float:
    """SU outage with perfect CDI: 1 − Γ(L−1, θ_s/γ_max)/Γ(L−1)."""
    return 1.0 - regularized_upper_gamma(params.antennas - 1, _snr_edge(params))


def phi(params: SystemParams) -> float:
    """CDI penalty coefficient φ of the OCB outage."""
    dim = params.antennas
    return (
        _pu_survival(params)
        * (dim - 1)
        * params.path_loss
        * params.theta_p
        * params.theta_s
        * upper_incomplete_gamma(dim - 2, _snr_edge(params))
        / (params.gamma_p * gamma_function(dim - 1))
    )


def phi_asymptotic(params: SystemParams) -> float:
    """φ′, the P_max -> inf limit of φ."""
    dim = params.antennas
    return (
        _pu_survival(params)
        * (dim - 1)
        * params.path_loss
        * params.theta_p
        * params.theta_s
        / ((dim - 2) * params.gamma_p)
    )


def ipc_penalty_coeff(params: SystemParams) -> float:
    """IPC penalty coefficient e^{−θ_p/γ_p}·Γ(L−1, θ_s/γ_max)/Γ(L−1)."""
    return _pu_survival(params) * regularized_upper_gamma(params.antennas - 1, _snr_edge(params))


def chi(params: SystemParams) -> float:
    """χ = γ_p·Γ(L−1, x)/(λθ_pθ_s·Γ(L−2, x)) with x = θ_s/γ_max."""
    x = _snr_edge(params)
    dim = params.antennas
    return (
        params.gamma_p
        * upper_incomplete_gamma(dim - 1, x)
        / (params.path_loss * params.theta_p * params.theta_s * upper_incomplete_gamma(dim - 2, x))
    )


def theorem1_su_outage(params: SystemParams, b_bits: Bits = None) -> AnalyticOutage:
    """
    SU outage for OCB without feedforward and perfect IPC.

    P_out = baseline + φ·2^{-B/(L-1)}

    Args:
        params: System parameters
        b_bits: CDI bits; defaults to params.b_cdi

    Returns:
        AnalyticOutage
    """
    b_bits = params.b_cdi if b_bits is None else b_bits
    penalty = phi(params) * cdi_scale(params.antennas, b_bits)
    return _outage(baseline_outage(params), penalty, 0.0, b_bits, params)


def theorem2_su_outage_ff(params: SystemParams, b_bits: Bits = None) -> AnalyticOutage:
    """SU outage for OCB with feedforward: the CDI penalty shrinks by (L−1)."""
    b_bits = params.b_cdi if b_bits is None else b_bits
    penalty = phi(params) / (params.antennas - 1) * cdi_scale(params.antennas, b_bits)
    return _outage(baseline_outage(params), penalty, 0.0, b_bits, params)


def corollary1_asymptote(params: SystemParams, b_bits: Bits = None) -> AnalyticOutage:
    """
    Interference-limited floor of the OCB outage as P_max -> inf.

    The value is φ′·2^{-B/(L-1)}; lower_bound carries e^{−θ_p/γ_p}·λθ_pθ_s/γ_p·2^{-B/(L-1)}.
    """
    b_bits = params.b_cdi if b_bits is None else b_bits
    scale = cdi_scale(params.antennas, b_bits)
    lower = _pu_survival(params) * params.path_loss * params.theta_p * params.theta_s / params.gamma_p * scale
    return _outage(
        0.0,
        phi_asymptotic(params) * scale,
        0.0,
        b_bits,
        params,
        regime=Regime.ASYMPTOTIC,
        lower_bound=lower,
    )


def prop2_upper_bound(
    params: SystemParams, a_bits: Bits = None, b_bits: Bits = None, feedforward: bool = False
) -> AnalyticOutage:
    """
    Upper bound on the OCB outage with quantized CDI and IPC.

    Without feedforward: baseline + φ·2^{-B/(L-1)} + c_ipc·2^{-A}.
    With feedforward: baseline + (φ + c_ipc·2^{-A})/(L−1)·2^{-B/(L-1)}.

    Args:
        params: System parameters
        a_bits: IPC bits; defaults to params.a_ipc (None means perfect IPC)
        b_bits: CDI bits; defaults to params.b_cdi
        feedforward: Use the feedforward form

    Returns:
        AnalyticOutage
    """
    a_bits = params.a_ipc if a_bits is None else a_bits
    b_bits = params.b_cdi if b_bits is None else b_bits
    scale = cdi_scale(params.antennas, b_bits)
    ipc_term = ipc_penalty_coeff(params) * ipc_scale(a_bits)
    if feedforward:
        shrink = scale / (params.antennas - 1)
        return _outage(baseline_outage(params), phi(params) * shrink, ipc_term * shrink, b_bits, params)
    return _outage(baseline_outage(params), phi(params) * scale, ipc_term, b_bits, params)


def corollary3_asymptote(params: SystemParams, a_bits: Bits = None, b_bits: Bits = None) -> AnalyticOutage:
    """High-power limit of the quantized-IPC bound: φ′·2^{-B/(L-1)} + e^{−θ_p/γ_p}·2^{-A}."""
    a_bits = params.a_ipc if a_bits is None else a_bits
    b_bits = params.b_cdi if b_bits is None else b_bits
    return _outage(
        0.0,
        phi_asymptotic(params) * cdi_scale(params.antennas, b_bits),
        _pu_survival(params) * ipc_scale(a_bits),
        b_bits,
        params,
        regime=Regime.ASYMPTOTIC,
    )
