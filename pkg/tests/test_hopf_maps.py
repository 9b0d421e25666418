"""
Unit tests for the Haar functional, counit, dagger, antipode and the
sampled-function container.
"""

import json
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / 'heisqg' / 'src'))

from functions.closed_form import gaussian_test_function, zero_at_origin_function
from functions.grid import Grid
from functions.hopf import (
    antipode,
    counit,
    counit_defect,
    dagger,
    haar,
    haar_witness,
)
from functions.io import load_sampled, save_sampled
from functions.product import deformed_mul, involution
from groups.params import ModelParams
from utils.errors import ConfigurationError, HeisqgError
from utils.numerics import bump, relative_l2


class TestHaar:
    """Test h."""

    def test_gaussian_integral(self, grid):
        """Riemann sum equals the exact (p,q) integral times the r-sum."""
        phi = gaussian_test_function(width=1.0, bump_radius=0.4)
        r_sum = np.sum(bump(grid.r_points, 0.0, 0.4)) * grid.delta_r
        expected = phi.fast_total() * r_sum
        assert abs(haar(phi.sample(grid)) - expected) / abs(expected) < 1e-8

    def test_fast_total_is_width_squared(self):
        """∫ exp(-π|z|²/w²) dz = w²."""
        assert gaussian_test_function(width=1.3).fast_total() == pytest.approx(1.69, rel=1e-12)

    def test_faithful_trace_norm(self, grid, params, gaussian_pair):
        """h(φ*×φ) = ‖φ‖₂²."""
        phi, _ = gaussian_pair
        a = phi.sample(grid)
        value = haar(deformed_mul(involution(a, params), a, params))
        assert abs(value - a.l2_norm() ** 2) / a.l2_norm() ** 2 < 1e-6

    def test_trace_property(self, grid, params, gaussian_pair):
        """h(φ×ψ) = h(ψ×φ)."""
        phi, psi = gaussian_pair
        a, b = phi.sample(grid), psi.sample(grid)
        left = haar(deformed_mul(a, b, params))
        right = haar(deformed_mul(b, a, params))
        assert abs(left - right) / abs(left) < 1e-6


class TestCounit:
    """Test ε."""

    def test_origin_sample(self, grid, gaussian_pair):
        """ε(φ) = φ(0,0,0)."""
        phi, _ = gaussian_pair
        assert counit(phi.sample(grid)) == pytest.approx(complex(phi(np.zeros(3))), abs=1e-15)

    def test_two_routes_agree(self, grid, gaussian_pair):
        """Origin sample and ∫φ^∨(x,y,0) agree."""
        phi, _ = gaussian_pair
        assert counit_defect(phi.sample(grid)) < 1e-8

    def test_multiplicative(self, grid, params, gaussian_pair):
        """ε(φ×ψ) = ε(φ)ε(ψ)."""
        phi, psi = gaussian_pair
        a, b = phi.sample(grid), psi.sample(grid)
        lhs = counit(deformed_mul(a, b, params))
        rhs = counit(a) * counit(b)
        assert abs(lhs - rhs) / abs(rhs) < 1e-6

    def test_zero_at_origin(self, grid):
        """Antisymmetric pair of shifted Gaussians has ε = 0."""
        assert abs(counit(zero_at_origin_function().sample(grid))) < 1e-14

    def test_origin_off_grid(self, gaussian_pair):
        """An r axis without r = 0 is rejected."""
        phi, _ = gaussian_pair
        s = phi.sample(_ShiftedGrid())
        with pytest.raises(ConfigurationError):
            counit(s)


class _ShiftedGrid(Grid):
    """Grid whose r axis misses the origin."""

    @property
    def r_points(self):
        return super().r_points + 0.01


class TestDagger:
    """Test φ† evaluators."""

    def test_spectral_matches_analytic(self, grid, params, gaussian_pair):
        """Trigonometric interpolation reproduces the exact dagger."""
        phi, _ = gaussian_pair
        s = phi.sample(grid)
        exact = dagger(s, params, "analytic", phi)
        spectral = dagger(s, params, "spectral")
        assert np.max(np.abs(exact.samples - spectral.samples)) < 1e-8

    def test_cubic_reports_residual(self, grid, params, gaussian_pair):
        """The cubic path records its residual and flag."""
        phi, _ = gaussian_pair
        out = dagger(phi.sample(grid), params, "cubic")
        assert out.meta["method"] == "cubic"
        assert out.meta["residual"] > 0
        assert out.meta["degraded"] == (out.meta["residual"] > 1e-6)

    def test_involutive(self, grid, params, gaussian_pair):
        """(φ†)† = φ."""
        phi, _ = gaussian_pair
        s = phi.sample(grid)
        twice = dagger(dagger(s, params), params)
        assert np.max(np.abs(twice.samples - s.samples)[:, :, 1:]) < 1e-8

    def test_analytic_needs_closed_form(self, grid, params, gaussian_pair):
        """analytic without a closed form raises."""
        phi, _ = gaussian_pair
        with pytest.raises(ConfigurationError):
            dagger(phi.sample(grid), params, "analytic")


class TestAntipode:
    """Test κ."""

    def test_orders_agree(self, grid, params, gaussian_pair):
        """(φ*)† and (φ†)* agree."""
        phi, _ = gaussian_pair
        k = antipode(phi.sample(grid), params, closed_form=phi)
        assert k.meta["order_defect"] < 1e-6

    def test_commutative_case(self, grid, gaussian_pair):
        """ℏ = 0: κφ(p,q,r) = φ(-e^{-λr}p, -e^{-λr}q, -r)."""
        phi, _ = gaussian_pair
        params = ModelParams(lam=1.0, hbar=0.0)
        k = antipode(phi.sample(grid), params, closed_form=phi)
        A, B, R = grid.mesh()
        s = np.exp(-R)
        expected = phi(np.stack([-s * A, -s * B, -R], axis=-1))
        assert np.max(np.abs(k.samples - expected)) < 1e-8

    def test_anti_multiplicative(self, grid, params, gaussian_pair):
        """κ(φ×ψ) = κψ × κφ."""
        phi, psi = gaussian_pair
        a, b = phi.sample(grid), psi.sample(grid)
        left = antipode(deformed_mul(a, b, params), params)
        right = deformed_mul(antipode(b, params, psi), antipode(a, params, phi), params)
        assert relative_l2(left.samples, right.samples) < 1e-5

    def test_rejects_lambda_zero(self, grid, gaussian_pair):
        """λ = 0 is not a quantum group."""
        phi, _ = gaussian_pair
        with pytest.raises(ConfigurationError):
            antipode(phi.sample(grid), ModelParams(lam=0.0))


class TestHaarWitness:
    """Test the non-unimodularity witness."""

    def test_ratio_far_from_one(self):
        """|h(κφ)/h(φ) - 1| > 0.1, close to e^{-2}."""
        w = haar_witness(cross_check=False)
        assert abs(w.ratio - 1) > 0.1
        assert w.ratio == pytest.approx(np.exp(-2.0), rel=0.05)

    def test_grid_cross_check(self):
        """Full antipode on the wide grid agrees with quadrature to 1%."""
        w = haar_witness()
        assert abs(w.grid_h_phi - w.h_phi) / abs(w.h_phi) < 0.01
        assert abs(w.grid_h_kappa_phi - w.h_kappa_phi) / abs(w.h_kappa_phi) < 0.01


class TestSampledIO:
    """Test the binary container."""

    def test_round_trip(self, grid, gaussian_pair, tmp_path):
        """Samples survive at complex64 precision with grid and picture."""
        phi, _ = gaussian_pair
        s = phi.sample(grid)
        s.meta["name"] = "phi"
        path = save_sampled(s, tmp_path / "phi.hqg")
        back = load_sampled(path)
        assert back.grid == grid
        assert back.picture == "pqr"
        assert back.meta["name"] == "phi"
        assert np.max(np.abs(back.samples - s.samples)) < 1e-6

    def test_header_is_json(self, grid, gaussian_pair, tmp_path):
        """Header decodes as JSON after the magic and length."""
        phi, _ = gaussian_pair
        path = save_sampled(phi.sample(grid), tmp_path / "phi.hqg")
        data = path.read_bytes()
        length = int.from_bytes(data[4:8], "little")
        header = json.loads(data[8:8 + length])
        assert header["dtype"] == "<c8"
        assert len(data) == 8 + length + 8 * 64 * 64 * 16

    def test_corrupt_file(self, tmp_path):
        """Wrong magic raises."""
        bad = tmp_path / "bad.hqg"
        bad.write_bytes(b"nope")
        with pytest.raises(HeisqgError):
            load_sampled(bad)
