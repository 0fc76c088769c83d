#!/usr/bin/env python3
"""
Acceptance checks for the cogfeed simulator at reduced trial counts.

Usage:
    python scripts/check_acceptance.py

    # More trials per configuration
    TRIALS=1000000 python scripts/check_acceptance.py
"""

import math
import os
import sys

# Add parent directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import numpy as np

from src.analysis import (
    baseline_outage,
    corollary1_asymptote,
    lemma6_delta_p,
    optimal_bit_allocation,
    prop2_upper_bound,
    theorem1_su_outage,
)
from src.channel import SystemParams
from src.feedback import CodebookKind, build_ipc_codebook, ipc_power_loss_bound, sample_conditional_signal
from src.feedback.ipc import BeamformingMode
from src.sim import TrialConfig, distribution_checks, estimate_outage, estimate_paired
from src.utils.logging_config import setup_logging


class AcceptanceChecker:
    """Acceptance suite for the Monte Carlo engine and closed forms."""

    def __init__(self):
        """Initialize checker settings."""
        self.trials = int(os.getenv("TRIALS", "200000"))
        self.workers = int(os.getenv("WORKERS", str(os.cpu_count() or 1)))
        self.seed = int(os.getenv("SEED", "2024"))

        # Results tracking
        self.results = {"passed": 0, "failed": 0, "tests": []}

    def print_header(self, text: str):
        """Print section header."""
        print(f"\n{'=' * 60}")
        print(f"{text}")
        print('=' * 60)

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        """
        Record one check.

        Args:
            name: Check name
            passed: Outcome
            detail: Numbers behind the outcome

        Returns:
            The outcome
        """
        status = "PASS" if passed else "FAIL"
        mark = "✓" if passed else "✗"
        print(f"  {mark} {status} {name}" + (f"  ({detail})" if detail else ""))
        self.results["passed" if passed else "failed"] += 1
        self.results["tests"].append({"name": name, "status": status, "error": detail})
        return passed

    def config(self, gamma_max_db: float, **values) -> TrialConfig:
        params = dict(values.pop("params", {}))
        gamma_p_db = params.pop("gamma_p_db", 10.0)
        return TrialConfig.create(
            params=SystemParams.from_db(gamma_p_db=gamma_p_db, gamma_max_db=gamma_max_db, **params),
            n_trials=self.trials,
            master_seed=self.seed,
            **values,
        )

    def estimate(self, cfg: TrialConfig):
        return estimate_outage(cfg, workers=self.workers)

    def test_pu_protection(self):
        """PU outage equals 1 − e^{−θ_p/γ_p} for every design."""
        self.print_header("PU protection")
        for mode in BeamformingMode:
            for feedforward in (False, True):
                for a_bits, b_bits in ((None, 8), (4, 20)):
                    for gamma_max_db in (0.0, 40.0):
                        cfg = self.config(
                            gamma_max_db,
                            params={"b_cdi": b_bits, "a_ipc": a_bits},
                            mode=mode,
                            feedforward=feedforward,
                        )
                        est = self.estimate(cfg)
                        gap = abs(est.pu_outage - est.pu_outage_reference)
                        self.check(
                            f"{mode.value} ff={feedforward} A={a_bits} γmax={gamma_max_db:g}dB",
                            gap <= est.pu_ci_halfwidth and est.budget_violations == 0,
                            f"pu={est.pu_outage:.4f} ref={est.pu_outage_reference:.4f} violations={est.budget_violations}",
                        )

    def test_theorem1(self):
        """OCB outage matches the first-order closed form at B = 16."""
        self.print_header("OCB outage vs closed form")
        for gamma_max_db in (10.0, 20.0):
            cfg = self.config(gamma_max_db, params={"b_cdi": 16})
            est = self.estimate(cfg)
            value = theorem1_su_outage(cfg.params).value
            tolerance = max(0.1 * value, est.su_ci_halfwidth)
            self.check(
                f"γmax={gamma_max_db:g}dB",
                abs(est.su_outage - value) <= tolerance,
                f"sim={est.su_outage:.5f} formula={value:.5f}",
            )

    def test_saturation(self):
        """Interference-limited floor and its slope in B."""
        self.print_header("Saturation at high transmit power")
        outages = []
        bits = (12, 16, 20)
        for b_bits in bits:
            cfg = self.config(40.0, params={"b_cdi": b_bits})
            est = self.estimate(cfg)
            floor = corollary1_asymptote(cfg.params).value
            outages.append(est.su_outage)
            self.check(
                f"B={b_bits}",
                abs(est.su_outage - floor) <= max(0.15 * floor, est.su_ci_halfwidth),
                f"sim={est.su_outage:.5f} floor={floor:.5f}",
            )
        slope = np.polyfit(bits, np.log2(np.maximum(outages, 1e-12)), 1)[0]
        self.check("slope of log2 outage vs B", abs(slope + 1 / 3) <= 0.1 / 3, f"slope={slope:.4f}")

    def test_feedforward_factor(self):
        """Feedforward divides the CDI penalty by L − 1."""
        self.print_header("Feedforward gain")
        plain = self.config(40.0, params={"b_cdi": 12})
        base = baseline_outage(plain.params)
        est = self.estimate(plain)
        est_ff = self.estimate(plain.with_updates(feedforward=True))
        ratio = (est.su_outage - base) / max(est_ff.su_outage - base, 1e-12)
        self.check("penalty ratio ≈ 3", abs(ratio - 3.0) <= 0.6, f"ratio={ratio:.3f}")

    def test_ocb_nocb_convergence(self):
        """OCB and NOCB converge at high power; NOCB wins at low power."""
        self.print_header("OCB vs NOCB")
        for b_bits in (8, 16):
            ocb = self.config(40.0, params={"b_cdi": b_bits})
            paired = estimate_paired(ocb, ocb.with_updates(mode=BeamformingMode.NOCB), workers=self.workers)
            self.check(
                f"γmax=40dB B={b_bits} converge",
                abs(paired.difference) <= max(paired.halfwidth, 1e-12),
                f"diff={paired.difference:.2e} ±{paired.halfwidth:.2e}",
            )
        ocb = self.config(10.0, params={"b_cdi": 8})
        paired = estimate_paired(ocb, ocb.with_updates(mode=BeamformingMode.NOCB), workers=self.workers)
        self.check(
            "γmax=10dB NOCB better",
            paired.difference > paired.halfwidth,
            f"diff={paired.difference:.2e} ±{paired.halfwidth:.2e}",
        )

    def test_distributions(self):
        """KS checks of the sampled laws."""
        self.print_header("Distribution checks")
        table = distribution_checks(SystemParams(b_cdi=12), n_samples=100_000, seed=self.seed)
        for _, row in table.iterrows():
            self.check(row["quantity"], bool(row["passed"]), f"p={row['p_value']:.3f}")

    def test_codebooks(self):
        """Equal-probability cells and the IPC power-loss bound."""
        self.print_header("IPC codebooks")
        rng = np.random.default_rng(self.seed)
        for a_bits in (2, 4, 6):
            params = SystemParams(b_cdi=12, a_ipc=a_bits)
            codebook = build_ipc_codebook(params, CodebookKind.ETA, 200_000, rng)
            fresh = sample_conditional_signal(params, CodebookKind.ETA, 200_000, rng)
            _, index = codebook.floor(fresh)
            mass = np.bincount(index, minlength=codebook.n_levels) / fresh.size
            n = codebook.n_levels
            sigma = math.sqrt((1 / n) * (1 - 1 / n) / fresh.size)
            worst = float(np.max(np.abs(mass - 1 / n)))
            self.check(f"A={a_bits} cell mass", worst <= 4 * sigma, f"max dev={worst:.2e}")
        for a_bits in (4, 6, 8):
            params = SystemParams(b_cdi=12, a_ipc=a_bits)
            codebook = build_ipc_codebook(params, CodebookKind.ETA, 400_000, rng)
            measured = ipc_power_loss_bound(codebook, params)
            predicted = lemma6_delta_p(params, a_bits, 12)
            self.check(
                f"A={a_bits} ΔP",
                abs(measured - predicted) <= 0.2 * predicted,
                f"measured={measured:.4g} predicted={predicted:.4g}",
            )

    def test_quantized_ipc_bound(self):
        """Simulated outage stays below the quantized-IPC bound."""
        self.print_header("Quantized IPC bound")
        rng = np.random.default_rng(self.seed)
        for _ in range(5):
            b_bits = int(rng.integers(10, 21))
            a_bits = int(rng.integers(3, 9))
            gamma_max_db = float(rng.uniform(0.0, 40.0))
            cfg = self.config(gamma_max_db, params={"b_cdi": b_bits, "a_ipc": a_bits})
            est = self.estimate(cfg)
            bound = prop2_upper_bound(cfg.params).value
            self.check(
                f"A={a_bits} B={b_bits} γmax={gamma_max_db:.1f}dB",
                est.su_outage <= bound + est.su_ci_halfwidth,
                f"sim={est.su_outage:.5f} bound={bound:.5f}",
            )

    def test_bit_allocation(self):
        """Closed-form split close to the Monte Carlo argmin."""
        self.print_header("Bit allocation")
        for gamma_p_db, slack in ((10.0, 2), (13.0, 1)):
            outages = {}
            for a_bits in range(1, 12):
                cfg = self.config(20.0, params={"gamma_p_db": gamma_p_db, "a_ipc": a_bits, "b_cdi": 12 - a_bits})
                outages[a_bits] = self.estimate(cfg).su_outage
            empirical = min(outages, key=outages.get)
            analytic = optimal_bit_allocation(12, cfg.params).a_bits
            self.check(
                f"γp={gamma_p_db:g}dB",
                abs(empirical - analytic) <= slack,
                f"A* analytic={analytic} empirical={empirical}",
            )

    def test_local_quantization(self):
        """Quantizing s_s with B' = 8 bits costs little."""
        self.print_header("Quantized local feedback")
        for mode in BeamformingMode:
            for gamma_max_db in (10.0, 20.0, 30.0):
                cfg = self.config(gamma_max_db, params={"b_cdi": 12}, mode=mode, feedforward=True)
                perfect = self.estimate(cfg).su_outage
                quantized = self.estimate(cfg.with_params(b_local=8)).su_outage
                increase = (quantized - perfect) / max(perfect, 1e-12)
                self.check(f"{mode.value} γmax={gamma_max_db:g}dB", increase < 0.15, f"increase={increase:.3f}")

    def test_determinism(self):
        """Identical results for any worker count."""
        self.print_header("Determinism")
        cfg = self.config(20.0, params={"b_cdi": 12, "a_ipc": 4}, mode=BeamformingMode.NOCB)
        serial = estimate_outage(cfg, workers=1)
        parallel = estimate_outage(cfg, workers=max(self.workers, 2))
        self.check("workers=1 vs parallel", serial == parallel)

    def print_summary(self):
        """Print test summary."""
        self.print_header("Test Summary")

        total = self.results["passed"] + self.results["failed"]
        pass_rate = (self.results["passed"] / total * 100) if total > 0 else 0

        print(f"\nTotal Checks: {total}")
        print(f"Passed: {self.results['passed']} ({pass_rate:.1f}%)")
        print(f"Failed: {self.results['failed']}")

        if self.results["failed"] > 0:
            print("\nFailed checks:")
            for test in self.results["tests"]:
                if test["status"] != "PASS":
                    print(f"  - {test['name']}: {test.get('error', 'Unknown error')}")

        print(f"\nTrials per configuration: {self.trials}")

    def run_all_tests(self):
        """Run all checks."""
        print(f"Starting acceptance checks with {self.trials} trials, {self.workers} workers")

        self.test_pu_protection()
        self.test_theorem1()
        self.test_saturation()
        self.test_feedforward_factor()
        self.test_ocb_nocb_convergence()
        self.test_distributions()
        self.test_codebooks()
        self.test_quantized_ipc_bound()
        self.test_bit_allocation()
        self.test_local_quantization()
        self.test_determinism()

        self.print_summary()

        # Return exit code
        return 0 if self.results["failed"] == 0 else 1


def main():
    """Main entry point."""
    setup_logging(level=os.getenv("LOG_LEVEL", "WARNING"))
    checker = AcceptanceChecker()
    exit_code = checker.run_all_tests()
    sys.exit(exit_code)


if __name__ == "__main__":
    main()
