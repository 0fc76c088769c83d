"""Tests for CDI quantization, IPC signals and IPC codebooks."""

import numpy as np
import pytest

from src.channel import SystemParams, sample_channels
from src.feedback import (
    BeamformingMode,
    Branch,
    CodebookKind,
    IpcCodebook,
    build_ipc_codebook,
    compute_omega,
    decompose_cdi,
    eta_signal,
    get_codebook_cache,
    ipc_nocb,
    ipc_power_loss_bound,
    nu_signal,
    quantize_cdi_rvq,
    quantize_cdi_statistical,
    quantize_ipc_ocb,
    quantize_local_cdi,
    rvq_codebook,
    rvq_select,
    sample_conditional_signal,
    sphere_cap_perturb,
)
from src.feedback import cache as cache_module
from src.mathkit import inner_product, norm, unit_uniform_sphere
from src.utils.errors import ConfigurationError, ResourceError, SamplingError


def _codebook(levels, a_bits=2, p_max=10.0, kind=CodebookKind.ETA):
    return IpcCodebook(
        levels=np.asarray(levels, dtype=float),
        kind=kind,
        a_bits=a_bits,
        b_bits=12,
        p_max=p_max,
        params_hash="test",
        n_samples=100_000,
        seed=0,
        accepted=100_000,
    )


class TestCdiQuantization:
    """Tests for the sphere-cap quantizer and the decomposition."""

    def test_sphere_cap_error(self, rng):
        """Test that ε matches the realized chordal distance and stays in the cap."""
        s = unit_uniform_sphere(4, rng, size=2000)
        s_hat, eps = sphere_cap_perturb(s, 12, rng)
        np.testing.assert_allclose(norm(s_hat), 1.0)
        np.testing.assert_allclose(1.0 - np.abs(inner_product(s_hat, s)) ** 2, eps, atol=1e-12)
        assert np.all(eps <= 2.0 ** (-12 / 3))

    def test_sphere_cap_law(self, rng):
        """Test E[ε] = (L−1)/L · 2^{-B/(L-1)}."""
        s = unit_uniform_sphere(4, rng, size=100_000)
        _, eps = sphere_cap_perturb(s, 6, rng)
        assert np.mean(eps) == pytest.approx(0.75 * 2.0 ** (-2), rel=0.01)

    def test_unquantized_passthrough(self, rng):
        """Test that infinite resolution leaves directions untouched."""
        s = unit_uniform_sphere(4, rng, size=10)
        s_hat, eps = sphere_cap_perturb(s, None, rng)
        np.testing.assert_array_equal(s_hat, s)
        np.testing.assert_array_equal(eps, 0.0)
        np.testing.assert_array_equal(quantize_local_cdi(s, None, rng), s)

    def test_decomposition(self, params, rng):
        """Test s = a·ŝ_x + b·ŝ_⊥ with ŝ_⊥ ⟂ ŝ_x and δ ≤ ε."""
        real = sample_channels(params, rng, size=500)
        cdi = quantize_cdi_statistical(real.s_x, real.s_s, 8, rng)
        rebuilt = cdi.a[:, None] * cdi.s_hat_x + cdi.b[:, None] * cdi.s_hat_perp
        np.testing.assert_allclose(rebuilt, real.s_s, atol=1e-12)
        assert np.max(np.abs(inner_product(cdi.s_hat_x, cdi.s_hat_perp))) < 1e-12
        assert np.all(cdi.delta <= cdi.epsilon)
        assert np.all(np.imag(cdi.b) == 0) and np.all(np.real(cdi.b) >= 0)
        assert np.all((cdi.kappa >= 0) & (cdi.kappa <= 1))

    def test_decomposition_parallel_direction(self, rng):
        """Test b = 0 when s lies along ŝ_x; ŝ_⊥ is still a unit vector orthogonal to ŝ_x."""
        s = unit_uniform_sphere(4, rng)
        cdi = decompose_cdi(s, s, s)
        assert abs(cdi.b) == pytest.approx(0.0, abs=1e-12)
        assert norm(cdi.s_hat_perp) == pytest.approx(1.0)
        assert abs(inner_product(s, cdi.s_hat_perp)) < 1e-12
        assert cdi.epsilon == pytest.approx(0.0, abs=1e-12)

    def test_row(self, params, rng):
        """Test extraction of one trial."""
        real = sample_channels(params, rng, size=4)
        cdi = quantize_cdi_statistical(real.s_x, real.s_s, 8, rng)
        assert cdi.row(2).epsilon == cdi.epsilon[2]


class TestRvq:
    """Tests for random vector quantization."""

    def test_selects_best_codeword(self, rng):
        """Test that a codeword equal to the direction is selected."""
        codebook = rvq_codebook(4, 4, rng)
        s = codebook[5] * np.exp(1j * 0.7)
        np.testing.assert_allclose(rvq_select(s, codebook), codebook[5])

    def test_batch_selection(self, params, rng):
        """Test batched quantization error within the RVQ range."""
        real = sample_channels(params, rng, size=200)
        cdi = quantize_cdi_rvq(real.s_x, real.s_s, 6, rng)
        assert cdi.s_hat_x.shape == (200, 4)
        assert np.all((cdi.epsilon >= 0) & (cdi.epsilon <= 1))

    def test_too_many_bits(self, rng):
        """Test that huge codebooks are refused."""
        with pytest.raises(ResourceError):
            rvq_codebook(17, 4, rng)
        with pytest.raises(ResourceError):
            quantize_cdi_rvq(np.ones(4), np.ones(4), None, rng)


class TestIpcSignals:
    """Tests for the η and ν signals and their quantization."""

    def test_omega(self, params):
        """Test ω sign at the PU outage boundary."""
        g_edge = params.theta_p / params.gamma_p
        assert compute_omega(g_edge, params) == pytest.approx(0.0, abs=1e-12)
        assert compute_omega(0.1, params) < 0

    def test_eta_cases(self, params):
        """Test P_max in PU outage and +inf for a zero error."""
        eta = eta_signal(np.array([-1.0, 2.0, 2.0]), np.array([4.0, 4.0, 4.0]), np.array([0.1, 0.0, 0.5]), params)
        assert eta[0] == params.p_max
        assert np.isinf(eta[1])
        assert eta[2] == pytest.approx(2.0 / (0.1 * 4.0 * 0.5))

    def test_nu_cases(self, params):
        """Test ν with perfect CDI and NaN in PU outage."""
        nu = nu_signal(np.array([-1.0, 0.4]), np.array([4.0, 4.0]), np.zeros(2), np.zeros(2), params)
        assert np.isnan(nu[0])
        assert nu[1] == pytest.approx(1.0)

    def test_quantize_ocb_unquantized(self, params):
        """Test the cap at P_max and the outage branch."""
        ipc = quantize_ipc_ocb(np.array([3.0, 50.0, 1.0]), None, np.array([1.0, 1.0, -1.0]), params)
        np.testing.assert_allclose(ipc.ocb_power, [3.0, params.p_max, params.p_max])
        np.testing.assert_array_equal(ipc.outage_bit, [False, False, True])
        np.testing.assert_array_equal(ipc.branch, [Branch.ORTHOGONAL, Branch.ORTHOGONAL, Branch.PU_OUTAGE])
        np.testing.assert_array_equal(ipc.level_index, [-1, -1, -1])
        assert ipc.mode is BeamformingMode.OCB

    def test_quantize_ocb_floor(self, params):
        """Test floor quantization below P_max."""
        codebook = _codebook([0.0, 1.0, 2.0, 4.0])
        ipc = quantize_ipc_ocb(np.array([1.5, 3.9, 0.5]), codebook, np.ones(3), params)
        np.testing.assert_allclose(ipc.ocb_power, [1.0, 2.0, 0.0])
        np.testing.assert_array_equal(ipc.level_index, [1, 2, 0])

    def test_nocb_branches(self, params, rng):
        """Test NOCB branch selection and header bits."""
        s_x = unit_uniform_sphere(4, rng, size=3)
        s_s = unit_uniform_sphere(4, rng, size=3)
        cdi = decompose_cdi(s_x, s_s, s_x)
        omega = np.array([-1.0, 0.4, 0.8])
        ipc = ipc_nocb(omega, np.full(3, 4.0), cdi, None, params)
        np.testing.assert_array_equal(
            ipc.branch, [Branch.PU_OUTAGE, Branch.NON_ORTHOGONAL, Branch.NON_ORTHOGONAL]
        )
        np.testing.assert_allclose(ipc.mu1[1:], [1.0, 2.0], rtol=1e-6)
        np.testing.assert_allclose(ipc.mu2, params.p_max)
        outage, non_orthogonal = ipc.header()
        np.testing.assert_array_equal(outage, [True, False, False])
        np.testing.assert_array_equal(non_orthogonal, [False, True, True])

    def test_nocb_orthogonal_fallback(self, params, rng):
        """Test the OCB fallback when the leakage exceeds the budget."""
        s = unit_uniform_sphere(4, rng)
        s_hat, _ = sphere_cap_perturb(s, 0, rng)
        cdi = decompose_cdi(s, unit_uniform_sphere(4, rng), s_hat)
        ipc = ipc_nocb(np.array(1e-6), np.array(4.0), cdi, None, params)
        assert ipc.branch == Branch.ORTHOGONAL
        assert ipc.mu1 == 0.0


class TestIpcCodebook:
    """Tests for IpcCodebook."""

    def test_validation(self):
        """Test level checks."""
        with pytest.raises(ConfigurationError):
            _codebook([0.5, 1.0, 2.0, 3.0])
        with pytest.raises(ConfigurationError):
            _codebook([0.0, 2.0, 1.0, 3.0])
        with pytest.raises(ConfigurationError):
            _codebook([0.0, 1.0, 2.0])

    def test_floor(self):
        """Test the largest level not above each value."""
        values, index = _codebook([0.0, 1.0, 2.0, 3.0]).floor([0.5, 1.0, 2.9, np.inf])
        np.testing.assert_allclose(values, [0.0, 1.0, 2.0, 3.0])
        np.testing.assert_array_equal(index, [0, 1, 2, 3])

    def test_levels_above_cap(self):
        """Test counting levels beyond P_max."""
        assert _codebook([0.0, 1.0, 12.0, 30.0], p_max=10.0).levels_above_cap == 2

    def test_save_and_load(self, tmp_path):
        """Test that a saved codebook loads with the same levels and hash."""
        codebook = _codebook([0.0, 0.25, 1.5, 7.0])
        path = codebook.save(tmp_path / "cb" / "eta.json")
        loaded = IpcCodebook.load(path)
        np.testing.assert_array_equal(loaded.levels, codebook.levels)
        assert loaded.content_hash() == codebook.content_hash()

    def test_power_loss_bound(self):
        """Test ΔP over the cells up to the one containing P_max."""
        params = SystemParams(p_max=5.0)
        assert ipc_power_loss_bound(_codebook([0.0, 1.0, 3.0, 10.0]), params) == pytest.approx(7.0)
        assert ipc_power_loss_bound(_codebook([0.0, 1.0, 2.0, 4.0]), params) == pytest.approx(2.0)
        degenerate = IpcCodebook.degenerate_for(params, CodebookKind.ETA, 2, 100_000, 0)
        assert ipc_power_loss_bound(degenerate, params) == params.p_max

    def test_kinds_for(self):
        """Test codebook kinds per mode."""
        assert CodebookKind.kinds_for(BeamformingMode.OCB, False) == (CodebookKind.ETA, None)
        assert CodebookKind.kinds_for(BeamformingMode.NOCB, True) == (CodebookKind.ETA_FF, CodebookKind.NU_FF)


class TestCodebookConstruction:
    """Tests for equal-probability codebook construction."""

    def test_equal_probability_cells(self, quantized_params, rng):
        """Test that fresh samples fall evenly into the cells."""
        codebook = build_ipc_codebook(quantized_params, CodebookKind.ETA, 100_000, rng, a_bits=2)
        assert codebook.n_levels == 4
        assert codebook.levels[0] == 0.0
        assert np.all(np.diff(codebook.levels) > 0)
        fresh = sample_conditional_signal(quantized_params, CodebookKind.ETA, 100_000, rng)
        _, index = codebook.floor(fresh)
        mass = np.bincount(index, minlength=4) / fresh.size
        np.testing.assert_allclose(mass, 0.25, atol=0.01)

    def test_nu_codebook(self, quantized_params, rng):
        """Test that ν² codebooks are built from non-negative draws."""
        codebook = build_ipc_codebook(quantized_params, CodebookKind.NU, 100_000, rng)
        assert codebook.n_levels == 16
        assert codebook.kind.is_nu

    def test_conditional_samples(self, quantized_params, rng):
        """Test that conditional η draws are positive."""
        draws = sample_conditional_signal(quantized_params, CodebookKind.ETA_FF, 10_000, rng)
        assert np.all(draws[np.isfinite(draws)] > 0)

    def test_rejects_small_sample(self, quantized_params, rng):
        """Test the minimum sample count."""
        with pytest.raises(ConfigurationError):
            build_ipc_codebook(quantized_params, CodebookKind.ETA, 1000, rng)

    def test_rejects_missing_bits(self, params, rng):
        """Test that A must be set."""
        with pytest.raises(ConfigurationError):
            build_ipc_codebook(params, CodebookKind.ETA, 100_000, rng)


class TestCodebookCache:
    """Tests for CodebookCache."""

    def test_get_or_build_caches(self, quantized_params):
        """Test that a second request returns the cached codebook."""
        cache = get_codebook_cache()
        first = cache.get_or_build(quantized_params, CodebookKind.ETA, n_samples=100_000, seed=3)
        second = cache.get_or_build(quantized_params, CodebookKind.ETA, n_samples=100_000, seed=3)
        assert first is second
        assert len(cache) == 1

    def test_seeded_build_is_reproducible(self, quantized_params):
        """Test that the same seed rebuilds the same levels."""
        first = get_codebook_cache().get_or_build(quantized_params, CodebookKind.ETA, n_samples=100_000, seed=3)
        rebuilt = get_codebook_cache(force_reload=True).get_or_build(
            quantized_params, CodebookKind.ETA, n_samples=100_000, seed=3
        )
        assert first is not rebuilt
        np.testing.assert_array_equal(first.levels, rebuilt.levels)

    def test_codebooks_for(self, params, quantized_params):
        """Test codebook sets per mode."""
        cache = get_codebook_cache()
        assert cache.codebooks_for(params, BeamformingMode.OCB) is None
        nocb = cache.codebooks_for(quantized_params, BeamformingMode.NOCB, n_samples=100_000, seed=1)
        assert nocb.eta.kind is CodebookKind.ETA
        assert nocb.nu.kind is CodebookKind.NU
        assert set(nocb.content_hashes()) == {"eta", "nu"}

    def test_degenerate_fallback(self, quantized_params, monkeypatch):
        """Test the {0} codebook when sampling fails."""

        def failing_build(*args, **kwargs):
            raise SamplingError("no samples")

        monkeypatch.setattr(cache_module, "build_ipc_codebook", failing_build)
        codebook = get_codebook_cache().get_or_build(quantized_params, CodebookKind.NU, n_samples=100_000, seed=0)
        assert codebook.degenerate
        np.testing.assert_array_equal(codebook.levels, [0.0])
