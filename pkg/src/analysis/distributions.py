"""Distribution laws of the OCB transmit power, CDI errors and effective gain.

First-order CDFs of the transmit power hold for 0 ≤ τ ≤ P_max. Exact
counterparts integrate the quantization-error laws without truncation and
serve as sharper oracles for the Monte Carlo engine.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate, stats

from src.channel.params import Bits, SystemParams
from src.analysis.outage import cdi_scale
from src.utils.errors import DomainError


def epsilon_cdf(tau, antennas: int, b_bits: Bits):
    """Pr(ε ≤ τ) = 2^B·τ^{L−1} on [0, 2^{-B/(L-1)}]."""
    tau = np.asarray(tau, dtype=float)
    if b_bits is None:
        return np.where(tau >= 0, 1.0, 0.0)
    radius = cdi_scale(antennas, b_bits)
    return np.clip(tau / radius, 0.0, 1.0) ** (antennas - 1)


def delta_pdf(tau, antennas: int, b_bits: int):
    """f_δ(τ) = (L−1)·2^{B/(L−1)}·(1 − 2^{B/(L−1)}τ)^{L−2} on its support."""
    tau = np.asarray(tau, dtype=float)
    inv_radius = 1.0 / cdi_scale(antennas, b_bits)
    inside = (tau >= 0) & (tau <= 1.0 / inv_radius)
    body = (antennas - 1) * inv_radius * np.clip(1.0 - inv_radius * tau, 0.0, 1.0) ** (antennas - 2)
    return np.where(inside, body, 0.0)


def delta_cdf(tau, antennas: int, b_bits: int):
    """Pr(δ ≤ τ) = 1 − 2^B·(2^{-B/(L-1)} − τ)^{L−1}."""
    tau = np.asarray(tau, dtype=float)
    radius = cdi_scale(antennas, b_bits)
    return 1.0 - np.clip(1.0 - np.clip(tau, 0.0, None) / radius, 0.0, 1.0) ** (antennas - 1)


def kappa_survival(tau, antennas: int):
    """Pr(κ > τ) = (1 − τ)^{L−2}, the overlap of two isotropic directions in C^{L−1}."""
    return np.clip(1.0 - np.asarray(tau, dtype=float), 0.0, 1.0) ** (antennas - 2)


def effective_gain_pdf(x, antennas: int):
    """Chi-square density with L−1 complex degrees of freedom, τ^{L−2}e^{−τ}/Γ(L−1)."""
    return stats.gamma.pdf(x, antennas - 1)


def effective_gain_cdf(x, antennas: int):
    return stats.gamma.cdf(x, antennas - 1)


def _mean_power_factor(u: float, antennas: int, b_bits: Bits, feedforward: bool) -> float:
    # E[(1 + u·e)^{-L}] over the CDI error e (ε, or δ with feedforward).
    if b_bits is None or u == 0.0:
        return 1.0
    x = u * cdi_scale(antennas, b_bits)
    if not feedforward:
        return (1.0 + x) ** (1 - antennas)
    value, _ = integrate.quad(
        lambda v: (antennas - 1) * (1.0 - v) ** (antennas - 2) * (1.0 + x * v) ** (-antennas),
        0.0,
        1.0,
    )
    return value


@dataclass(frozen=True)
class PowerLaws:
    """Evaluators for the OCB transmit-power distribution at fixed (params, B)."""

    params: SystemParams
    b_bits: Bits

    @property
    def _pu_survival(self) -> float:
        return math.exp(-self.params.theta_p / self.params.gamma_p)

    def _slope(self, feedforward: bool) -> float:
        # d/dτ of the first-order CDF of the transmit power.
        p = self.params
        factor = 1 if feedforward else p.antennas - 1
        return (
            self._pu_survival
            * factor
            * p.theta_p
            * p.path_loss
            / (p.gamma_p * p.sigma2)
            * cdi_scale(p.antennas, self.b_bits)
        )

    def _check_tau(self, tau) -> np.ndarray:
        tau = np.asarray(tau, dtype=float)
        if np.any(tau < 0) or np.any(tau > self.params.p_max):
            raise DomainError(f"τ must lie in [0, P_max={self.params.p_max:g}]")
        return tau

    def prob_full_power(self, feedforward: bool = False) -> float:
        """First-order Pr(P_s = P_max)."""
        return 1.0 - self._slope(feedforward) * self.params.p_max

    def power_cdf(self, tau, feedforward: bool = False, delta_p: float = 0.0):
        """
        First-order Pr(P_s < τ).

        With delta_p > 0 this is the bound on the quantized-IPC power,
        evaluated at τ + ΔP.

        Raises:
            DomainError: If τ lies outside [0, P_max]
        """
        tau = self._check_tau(tau)
        return self._slope(feedforward) * (tau + delta_p)

    def exact_power_cdf(self, tau, feedforward: bool = False):
        """Pr(P_s < τ) = e^{−θ_p/γ_p}·(1 − E[(1 + u_τ·e)^{−L}]), u_τ = θ_pλτ/(γ_pσ²)."""
        tau = self._check_tau(tau)
        p = self.params
        flat = np.atleast_1d(tau)
        values = np.array(
            [
                self._pu_survival
                * (1.0 - _mean_power_factor(
                    p.theta_p * p.path_loss * t / (p.gamma_p * p.sigma2), p.antennas, self.b_bits, feedforward
                ))
                for t in flat
            ]
        )
        return values.reshape(tau.shape) if tau.ndim else float(values[0])

    def exact_prob_full_power(self, feedforward: bool = False) -> float:
        """Pr(P_s = P_max) = 1 − Pr(P_s < P_max) without truncation."""
        return 1.0 - float(self.exact_power_cdf(self.params.p_max, feedforward))

    def effective_gain_pdf(self, x):
        return effective_gain_pdf(x, self.params.antennas)

    def epsilon_cdf(self, tau):
        return epsilon_cdf(tau, self.params.antennas, self.b_bits)

    def delta_pdf(self, tau):
        return delta_pdf(tau, self.params.antennas, self.b_bits)

    def delta_cdf(self, tau):
        return delta_cdf(tau, self.params.antennas, self.b_bits)

    def kappa_survival(self, tau):
        return kappa_survival(tau, self.params.antennas)


def lemma_distributions(params: SystemParams, b_bits: Bits = None) -> PowerLaws:
    """
    Distribution laws at CDI resolution B.

    Args:
        params: System parameters
        b_bits: CDI bits; defaults to params.b_cdi

    Returns:
        PowerLaws evaluator
    """
    return PowerLaws(params=params, b_bits=params.b_cdi if b_bits is None else b_bits)


def exact_su_outage_ocb(
    params: SystemParams, b_bits: Optional[int] = None, feedforward: bool = False
) -> float:
    """
    OCB SU outage with perfect IPC, integrated without first-order truncation.

    P_out = F(x0) + ∫_{x0}^∞ Pr(P_s < θ_sσ²/g)·f(g) dg with x0 = θ_s/γ_max
    and f the chi-square(L−1) effective-gain density.

    Args:
        params: System parameters
        b_bits: CDI bits; defaults to params.b_cdi
        feedforward: Use the δ law

    Returns:
        Outage probability
    """
    b_bits = params.b_cdi if b_bits is None else b_bits
    dim = params.antennas
    x0 = params.theta_s / params.gamma_max
    survival = math.exp(-params.theta_p / params.gamma_p)

    def integrand(g: float) -> float:
        u = params.theta_p * params.path_loss * params.theta_s / (params.gamma_p * g)
        power_cdf = survival * (1.0 - _mean_power_factor(u, dim, b_bits, feedforward))
        return power_cdf * stats.gamma.pdf(g, dim - 1)

    tail, _ = integrate.quad(integrand, x0, np.inf, limit=200)
    return float(effective_gain_cdf(x0, dim) + tail)
