"""Tests for complex-vector helpers and special functions."""

import math

import numpy as np
import pytest
from scipy import special

from src.mathkit import (
    beta_function,
    complex_gaussian,
    inner_product,
    norm,
    normalize,
    project_orthogonal,
    random_orthogonal_unit,
    regularized_upper_gamma,
    unit_uniform_sphere,
    upper_incomplete_gamma,
)
from src.utils.errors import DimensionError, DomainError


class TestVectors:
    """Tests for vector arithmetic."""

    def test_inner_product_conjugates_left(self):
        """Test that u†v conjugates the left operand."""
        u = np.array([1j, 0.0])
        v = np.array([1j, 2.0])
        assert inner_product(u, v) == pytest.approx(1.0)

    def test_inner_product_batch(self, rng):
        """Test row-wise inner products over a batch axis."""
        u = complex_gaussian(rng, (5, 3))
        v = complex_gaussian(rng, (5, 3))
        expected = [np.vdot(u[i], v[i]) for i in range(5)]
        np.testing.assert_allclose(inner_product(u, v), expected)

    def test_inner_product_length_mismatch(self):
        """Test that mismatched lengths raise DimensionError."""
        with pytest.raises(DimensionError):
            inner_product(np.ones(3), np.ones(4))

    def test_normalize_zero_vector(self):
        """Test that a zero vector stays zero."""
        np.testing.assert_array_equal(normalize(np.zeros(4, dtype=complex)), np.zeros(4))

    def test_project_orthogonal(self, rng):
        """Test that the projection is orthogonal and completes v."""
        u = unit_uniform_sphere(4, rng)
        v = complex_gaussian(rng, 4)
        w = project_orthogonal(v, u)
        assert abs(inner_product(u, w)) < 1e-12
        np.testing.assert_allclose(inner_product(u, v) * u + w, v)

    def test_unit_sphere_shapes_and_norms(self, rng):
        """Test isotropic unit vectors."""
        single = unit_uniform_sphere(4, rng)
        batch = unit_uniform_sphere(4, rng, size=100)
        assert single.shape == (4,)
        assert batch.shape == (100, 4)
        np.testing.assert_allclose(norm(batch), 1.0)

    def test_unit_sphere_bad_dimension(self, rng):
        """Test that dimension 0 is rejected."""
        with pytest.raises(DimensionError):
            unit_uniform_sphere(0, rng)

    def test_random_orthogonal_unit(self, rng):
        """Test directions drawn inside the orthogonal complement."""
        u = unit_uniform_sphere(4, rng, size=50)
        w = random_orthogonal_unit(u, rng)
        np.testing.assert_allclose(norm(w), 1.0)
        assert np.max(np.abs(inner_product(u, w))) < 1e-12

    def test_complex_gaussian_variance(self, rng):
        """Test CN(0, σ²) second moments."""
        z = complex_gaussian(rng, 200_000, variance=0.1)
        assert np.mean(np.abs(z) ** 2) == pytest.approx(0.1, rel=0.02)
        assert abs(np.mean(z**2)) < 0.005


class TestSpecialFunctions:
    """Tests for the incomplete gamma and beta functions."""

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_incomplete_gamma_matches_scipy(self, n):
        """Test the finite series against scipy."""
        x = np.array([0.0, 0.3, 1.0, 4.5])
        expected = special.gammaincc(n, x) * special.gamma(n)
        np.testing.assert_allclose(upper_incomplete_gamma(n, x), expected, rtol=1e-12)

    def test_incomplete_gamma_at_zero(self):
        """Test Γ(n, 0) = (n−1)!."""
        assert upper_incomplete_gamma(4, 0.0) == pytest.approx(math.factorial(3))

    def test_regularized_is_survival(self):
        """Test Γ(n, x)/Γ(n) against the gamma survival function."""
        assert regularized_upper_gamma(3, 0.3) == pytest.approx(special.gammaincc(3, 0.3))

    def test_regularized_survival_shape(self):
        """Test value 1 at zero, monotone decay and vanishing tail."""
        x = np.linspace(0.0, 60.0, 200)
        values = regularized_upper_gamma(3, x)
        assert values[0] == pytest.approx(1.0)
        assert np.all(np.diff(values) <= 0)
        assert values[-1] < 1e-20

    def test_incomplete_gamma_domain(self):
        """Test rejection of bad orders and negative arguments."""
        with pytest.raises(DomainError):
            upper_incomplete_gamma(0, 1.0)
        with pytest.raises(DomainError):
            upper_incomplete_gamma(2, -0.1)

    def test_beta_function(self):
        """Test 𝓑(2, 3) = 1/12."""
        assert beta_function(2, 3) == pytest.approx(1 / 12)
