"""
Unit tests for the group laws, η_λ and β.

Tests cover:
    - β and η_λ values, including the λ = 0 branch
    - The η identity and the λ → 0 bound
    - Associativity and inverses of H, G, H̃, G̃
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / 'heisqg' / 'src'))

from groups.laws import (
    ExtGElement,
    ExtHeisElement,
    GElement,
    HeisElement,
    associativity_defect,
    beta,
    eta,
    eta_identity_defect,
    eta_identity_scale,
    eta_limit_bound_holds,
    ext_g_identity,
    ext_g_inv,
    ext_g_mul,
    ext_heis_identity,
    ext_heis_inv,
    ext_heis_mul,
    g_identity,
    g_inv,
    g_mul,
    heis_identity,
    heis_inv,
    heis_mul,
    inverse_defect,
    random_ext_g,
    random_ext_heis,
    random_g,
    random_heis,
)
from groups.params import ModelParams
from utils.errors import ConfigurationError, DimensionError


class TestBeta:
    """Test the pairing β."""

    def test_dot_product(self):
        """β((1,2),(3,4)) = 11."""
        assert beta([1, 2], [3, 4]) == 11

    def test_zero_vector(self):
        """β(x, 0) = 0."""
        assert beta([1.5, -2.0], [0.0, 0.0]) == 0

    def test_orthonormal(self):
        """Distinct basis vectors pair to zero."""
        assert beta([1, 0], [0, 1]) == 0

    def test_length_mismatch_raises(self):
        """Different lengths raise DimensionError."""
        with pytest.raises(DimensionError):
            beta([1, 2], [1, 2, 3])


class TestEta:
    """Test η_λ and its identity."""

    def test_lambda_zero_branch(self):
        """η₀(r) = r."""
        assert eta(0.0, 5.0) == 5.0

    def test_eta_at_zero(self):
        """η_λ(0) = 0."""
        assert eta(0.7, 0.0) == 0.0

    def test_value(self):
        """η_{1/2}(1) = e - 1."""
        assert abs(eta(0.5, 1.0) - 1.718281828) < 1e-9

    def test_identity_example(self):
        """(0.5, 1, 1) gives zero defect."""
        assert eta_identity_defect(0.5, 1.0, 1.0) < 1e-15

    def test_identity_r_prime_zero(self):
        """r' = 0 reduces to η(r) - η(r)."""
        assert eta_identity_defect(1.3, 0.4, 0.0) == 0.0

    def test_identity_lambda_zero(self):
        """λ = 0: r + r' - r' - r."""
        assert eta_identity_defect(0.0, 0.3, 0.9) < 1e-15

    def test_identity_random_within_ulps(self, rng):
        """Random (λ, r, r') in [-2,2]³: defect within 4 ulps of the operands."""
        eps = np.finfo(float).eps
        for _ in range(1000):
            lam, r, rp = rng.uniform(-2, 2, 3)
            if lam == 0:
                continue
            assert eta_identity_defect(lam, r, rp) <= 4 * eps * eta_identity_scale(lam, r, rp)

    def test_limit_bound(self, rng):
        """|η_λ(r) - r| ≤ |λ| r² e^{2|λr|}."""
        r = rng.uniform(-2, 2, 200)
        for lam in [1e-1, 1e-2, 1e-4, -1e-3]:
            assert eta_limit_bound_holds(lam, r)

    def test_vectorized(self):
        """eta accepts arrays."""
        out = eta(1.0, np.array([0.0, 0.5]))
        assert out.shape == (2,)


class TestHeisenbergGroup:
    """Test the laws of H and H̃."""

    def test_example_product(self):
        """(1,0,0)·(0,1,0) = (1,1,1)."""
        out = heis_mul(HeisElement([1.0], [0.0], 0.0), HeisElement([0.0], [1.0], 0.0))
        assert np.allclose(out.as_array(), [1, 1, 1])

    def test_identity(self, rng):
        """g·e = g."""
        g = random_heis(rng, 2)
        assert np.allclose(heis_mul(g, heis_identity(2)).as_array(), g.as_array())

    def test_inverse_and_associativity(self, rng):
        """1000 random triples: associative, two-sided inverses."""
        for _ in range(1000):
            a, b, c = (random_heis(rng, 2) for _ in range(3))
            assert associativity_defect(heis_mul, a, b, c) < 1e-12
        for _ in range(100):
            a = random_heis(rng, 2)
            assert inverse_defect(heis_mul, heis_inv, heis_identity(2), a) < 1e-12

    def test_dimension_mismatch(self):
        """Mixing n raises."""
        with pytest.raises(DimensionError):
            heis_mul(heis_identity(1), heis_identity(2))

    def test_ext_w_zero_slice(self, rng):
        """w = 0 reproduces the H law."""
        a, b = random_heis(rng, 1), random_heis(rng, 1)
        ea = ExtHeisElement(a.x, a.y, a.z, 0.0)
        eb = ExtHeisElement(b.x, b.y, b.z, 0.0)
        assert np.allclose(ext_heis_mul(ea, eb).as_array()[:-1], heis_mul(a, b).as_array())

    def test_ext_laws(self, rng):
        """H̃ associative with inverses."""
        for _ in range(1000):
            a, b, c = (random_ext_heis(rng, 1) for _ in range(3))
            assert associativity_defect(ext_heis_mul, a, b, c) < 1e-12
        for _ in range(100):
            a = random_ext_heis(rng, 1)
            assert inverse_defect(ext_heis_mul, ext_heis_inv, ext_heis_identity(1), a) < 1e-11


class TestDualGroup:
    """Test the laws of G and G̃."""

    def test_lambda_zero_is_addition(self, rng):
        """λ = 0 gives componentwise addition."""
        a, b = random_g(rng, 2), random_g(rng, 2)
        assert np.allclose(g_mul(a, b, 0.0).as_array(), a.as_array() + b.as_array())

    def test_example(self):
        """λ=1: (1,1,0)·(0,0,ln 2) = (2,2,ln 2)."""
        out = g_mul(GElement([1.0], [1.0], 0.0), GElement([0.0], [0.0], np.log(2)), 1.0)
        assert np.allclose(out.as_array(), [2, 2, np.log(2)])

    def test_inverse(self, rng):
        """g·g⁻¹ = e."""
        for lam in [1.0, -0.5]:
            for _ in range(100):
                a = random_g(rng, 1)
                assert inverse_defect(lambda u, v: g_mul(u, v, lam), lambda u: g_inv(u, lam), g_identity(1), a) < 1e-12

    def test_associativity(self, rng):
        """1000 random triples."""
        for _ in range(1000):
            a, b, c = (random_g(rng, 1) for _ in range(3))
            assert associativity_defect(lambda u, v: g_mul(u, v, 0.8), a, b, c) < 1e-12

    def test_ext_example(self):
        """λ=1: (1,0,0,0)·(0,0,ln 2,3) = (2,0,ln 2,3)."""
        out = ext_g_mul(ExtGElement([1.0], [0.0], 0.0, 0.0), ExtGElement([0.0], [0.0], np.log(2), 3.0), 1.0)
        assert np.allclose(out.as_array(), [2, 0, np.log(2), 3])

    def test_ext_s_additive_and_laws(self, rng):
        """s adds; G̃ associative with inverses."""
        for _ in range(1000):
            a, b, c = (random_ext_g(rng, 1) for _ in range(3))
            assert ext_g_mul(a, b, 1.0).s == pytest.approx(a.s + b.s)
            assert associativity_defect(lambda u, v: ext_g_mul(u, v, 1.0), a, b, c) < 1e-12
        a = random_ext_g(rng, 1)
        assert inverse_defect(lambda u, v: ext_g_mul(u, v, 1.0), lambda u: ext_g_inv(u, 1.0), ext_g_identity(1), a) < 1e-12


class TestModelParams:
    """Test ModelParams validation."""

    def test_rejects_bad_n(self):
        """n must be ≥ 1."""
        with pytest.raises(ConfigurationError):
            ModelParams(n=0)

    def test_require_quantum(self):
        """λ = 0 is rejected for quantum constructions."""
        with pytest.raises(ConfigurationError):
            ModelParams(lam=0.0).require_quantum()

    def test_copy_helpers(self):
        """with_hbar / with_lambda return modified copies."""
        p = ModelParams(n=1, lam=1.0, hbar=1.0)
        assert p.with_hbar(0.5).hbar == 0.5
        assert p.with_lambda(0.25).lam == 0.25
        assert p.hbar == 1.0
