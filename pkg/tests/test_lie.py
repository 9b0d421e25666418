"""
Unit tests for the exact Lie bialgebra layer and the Poisson bracket.

Tests cover:
    - Brackets and Jacobi checks of 𝔥, 𝔥̃, 𝔤, 𝔤̃
    - Classical r-matrix, CYBE, ad-invariance of r₁₂ + r₂₁
    - δ, the dual bracket, θ and the group cocycle F
    - Poisson bracket values, Jacobi and multiplicativity
    - JSON serialization
"""

import sys
from pathlib import Path

import numpy as np
import pytest
import sympy

# Add src to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / 'heisqg' / 'src'))

from groups.laws import GElement, eta, random_g
from groups.params import ModelParams
from lie.algebras import LAM, LieAlgebraSpec, dual_g, extended_heisenberg, heisenberg
from lie.poisson import (
    PoissonPoint,
    SmoothFunctional,
    coordinate,
    jacobi_defect,
    poisson_bracket,
    poisson_lie_defect,
)
from lie.tensors import (
    LieTensor,
    ad_invariance_defect,
    algebra_to_json,
    bracket,
    classical_r_matrix,
    cocycle_F_defect,
    cocycle_law_defect,
    cybe_defect,
    delta_cocycle,
    dual_bracket_defects,
    dual_bracket_from_delta,
    group_cocycle_F,
    group_cocycle_F_derivative,
    tensor_from_json,
    tensor_to_json,
    theta,
    theta_pairing_defects,
    wedge,
)


def basis(alg, label):
    return LieTensor.basis(alg, label)


class TestBrackets:
    """Test structure constants."""

    def test_heisenberg_bracket(self):
        """[x1, y1] = z."""
        h = heisenberg(1)
        assert bracket(basis(h, "x1"), basis(h, "y1")).equals(basis(h, "z"))

    def test_center(self):
        """[z, x1] = 0."""
        h = heisenberg(2)
        assert bracket(basis(h, "z"), basis(h, "x1")).is_zero()

    def test_grading(self):
        """[d, x1] = x1 and [d, y1] = -y1 in 𝔥̃."""
        ht = extended_heisenberg(1)
        assert bracket(basis(ht, "d"), basis(ht, "x1")).equals(basis(ht, "x1"))
        assert bracket(basis(ht, "d"), basis(ht, "y1")).equals(-basis(ht, "y1"))

    def test_jacobi_checked_on_construction(self):
        """A non-Jacobi bracket is rejected."""
        one = sympy.Integer(1)
        br = {(0, 1): {2: one}, (1, 0): {2: -one}, (1, 2): {0: one}, (2, 1): {0: -one},
              (0, 2): {0: one}, (2, 0): {0: -one}}
        with pytest.raises(ValueError):
            LieAlgebraSpec("bad", ("a", "b", "c"), br, ("a", "b", "c"), 1)

    def test_algebra_mismatch(self):
        """Bracketing tensors over different algebras raises."""
        with pytest.raises(ValueError):
            bracket(basis(heisenberg(1), "x1"), basis(extended_heisenberg(1), "x1"))


class TestClassicalRMatrix:
    """Test r, CYBE and invariance."""

    def test_coefficients(self):
        """x1⊗y1 has 2λ, y1⊗x1 has 0, z⊗d and d⊗z have λ."""
        r = classical_r_matrix(1, 1)
        assert r[("x1", "y1")] == 2
        assert r[("y1", "x1")] == 0
        assert r[("z", "d")] == 1 and r[("d", "z")] == 1

    @pytest.mark.parametrize("n", [1, 2, 3])
    @pytest.mark.parametrize("lam", [1, -1, sympy.Rational(1, 2)])
    def test_cybe_exact_zero(self, n, lam):
        """CYBE defect is the exact zero tensor."""
        assert cybe_defect(classical_r_matrix(n, lam)).is_zero()

    def test_cybe_symbolic_lambda(self):
        """Zero for symbolic λ as well."""
        assert cybe_defect(classical_r_matrix(2)).is_zero()

    def test_cybe_zero_tensor(self):
        """r = 0 → 0."""
        assert cybe_defect(LieTensor.zero(extended_heisenberg(1), 2)).is_zero()

    def test_cybe_abelian_span(self):
        """r = x1⊗x1 in 𝔥 → 0."""
        h = heisenberg(1)
        assert cybe_defect(LieTensor.from_labels(h, {("x1", "x1"): 1})).is_zero()

    def test_cybe_detects_nonsolution(self):
        """x1⊗y1 alone does not solve the CYBE."""
        h = extended_heisenberg(1)
        assert not cybe_defect(LieTensor.from_labels(h, {("x1", "y1"): 1, ("d", "d"): 1})).is_zero()

    def test_symmetric_part_invariant(self):
        """(ad_X⊗1 + 1⊗ad_X)(r₁₂ + r₂₁) = 0 for X in 𝔥."""
        r = classical_r_matrix(2)
        defects = ad_invariance_defect(r + r.flip())
        assert "d" not in defects
        assert all(t.is_zero() for t in defects.values())

    def test_invariance_witness(self):
        """t = x1⊗y1, X = x1 → x1⊗z."""
        h = heisenberg(1)
        t = LieTensor.from_labels(h, {("x1", "y1"): 1})
        d = ad_invariance_defect(t, ["x1"])["x1"]
        assert d.equals(LieTensor.from_labels(h, {("x1", "z"): 1}))


class TestCobracket:
    """Test δ, dual bracket and θ."""

    def test_delta_x(self):
        """δ(x1) = λ x1∧z."""
        r = classical_r_matrix(1)
        ht = r.algebra
        assert delta_cocycle("x1", r).equals(LAM * wedge(basis(ht, "x1"), basis(ht, "z")))

    def test_delta_y(self):
        """δ(y1) = λ y1∧z."""
        r = classical_r_matrix(1)
        ht = r.algebra
        assert delta_cocycle("y1", r).equals(LAM * wedge(basis(ht, "y1"), basis(ht, "z")))

    def test_delta_z(self):
        """δ(z) = 0."""
        assert delta_cocycle("z", classical_r_matrix(1)).is_zero()

    def test_cocycle_law(self):
        """δ([X,Y]) = ad_X δ(Y) - ad_Y δ(X) on all pairs of 𝔥."""
        for n in (1, 2):
            assert all(t.is_zero() for t in cocycle_law_defect(classical_r_matrix(n)).values())

    def test_dual_bracket_examples(self):
        """[p1, r] = λp1, [p1, q1] = 0, [q1, r] = λq1."""
        r = classical_r_matrix(1)
        g = dual_g(1)
        assert dual_bracket_from_delta("p1", "r", r).equals(LAM * basis(g, "p1"))
        assert dual_bracket_from_delta("p1", "q1", r).is_zero()
        assert dual_bracket_from_delta("q1", "r", r).equals(LAM * basis(g, "q1"))

    @pytest.mark.parametrize("extended", [False, True])
    def test_dual_bracket_reproduces_declared(self, extended):
        """Every declared structure constant of 𝔤 (𝔤̃) is recovered exactly."""
        for n in (1, 2, 3):
            for lam in (LAM, sympy.Rational(1, 2)):
                defects = dual_bracket_defects(classical_r_matrix(n, lam), extended)
                assert all(t.is_zero() for t in defects.values())

    def test_theta_values(self):
        """θ(r) = p1∧q1, θ(p1) = 0."""
        g = dual_g(1)
        assert theta("r").equals(wedge(basis(g, "p1"), basis(g, "q1")))
        assert theta("p1").is_zero()

    def test_theta_pairing(self):
        """⟨θ(r), x1⊗y1⟩ = 1 and pairing consistent on all triples."""
        assert theta("r")[("p1", "q1")] == 1
        assert theta_pairing_defects(2) == []


class TestGroupCocycle:
    """Test F."""

    def test_F_zero(self):
        """F(0) = 0."""
        assert np.allclose(group_cocycle_F(0.0, 1.0).to_numpy(), 0)

    def test_F_derivative_is_theta(self):
        """F'(0) = θ(r)."""
        assert np.allclose(group_cocycle_F_derivative(0.0, 0.7), theta("r").to_numpy(), atol=1e-8)

    def test_cocycle_condition(self, rng):
        """F(r₁+r₂) = F(r₁) + e^{-2λr₁}F(r₂)."""
        assert cocycle_F_defect(1.0, -1.0, 1.0) < 1e-12
        for _ in range(50):
            r1, r2, lam = rng.uniform(-2, 2, 3)
            assert cocycle_F_defect(r1, r2, lam) < 1e-12


class TestPoissonBracket:
    """Test the bracket on G."""

    def test_p_q_is_eta(self, params, rng):
        """{p1, q1} = η_λ(r)."""
        p, q = coordinate(0), coordinate(1)
        for _ in range(10):
            pt = PoissonPoint(rng.uniform(-1, 1, 3))
            assert poisson_bracket(p, q, pt, params) == pytest.approx(eta(params.lam, pt.r))

    def test_classical_limit(self, rng):
        """λ = 0 gives r(β(x,y') - β(x',y))."""
        p, q = coordinate(0), coordinate(1)
        pt = PoissonPoint(np.array([0.3, -0.2, 0.8]))
        assert poisson_bracket(p, q, pt, ModelParams(lam=0.0)) == pytest.approx(0.8)

    def test_antisymmetry_fd(self, params):
        """{φ,ψ} = -{ψ,φ} with finite-difference gradients."""
        phi = SmoothFunctional(lambda c: np.sin(c[0]) * c[1] + c[2] ** 2)
        psi = SmoothFunctional(lambda c: np.exp(-c[0] ** 2) * np.cos(c[1] + c[2]))
        pt = PoissonPoint(np.array([0.2, 0.4, -0.3]))
        a = poisson_bracket(phi, psi, pt, params)
        b = poisson_bracket(psi, phi, pt, params)
        assert a == pytest.approx(-b, abs=1e-12)

    def test_jacobi_coordinates(self, params):
        """Coordinates p, q, r: Jacobi defect ≤ 1e-4."""
        pt = PoissonPoint(np.array([0.5, -0.3, 0.4]))
        assert jacobi_defect(coordinate(0), coordinate(1), coordinate(2), pt, params) <= 1e-4

    def test_jacobi_nonlinear(self, params):
        """Smooth nonlinear functionals: Jacobi defect ≤ 1e-4."""
        phi = SmoothFunctional(lambda c: np.sin(c[0]) * c[1])
        psi = SmoothFunctional(lambda c: c[1] ** 2 + c[0] * c[2])
        chi = SmoothFunctional(lambda c: np.cos(c[0] + c[1]) * c[2])
        pt = PoissonPoint(np.array([0.1, 0.7, -0.2]))
        assert jacobi_defect(phi, psi, chi, pt, params) <= 1e-4

    def test_jacobi_equal_pair(self, params):
        """Repeated functional: zero defect up to round-off."""
        pt = PoissonPoint(np.array([0.1, 0.2, 0.3]))
        p = coordinate(0)
        assert jacobi_defect(p, p, coordinate(1), pt, params) < 1e-8

    def test_jacobi_lambda_zero_linear(self):
        """λ = 0, linear functionals: zero up to round-off."""
        pt = PoissonPoint(np.array([0.1, 0.2, 0.3]))
        lin = SmoothFunctional(lambda c: 2 * c[0] - c[1], lambda c: np.array([2.0, -1.0, 0.0]))
        assert jacobi_defect(lin, coordinate(1), coordinate(0), pt, ModelParams(lam=0.0)) < 1e-8

    def test_multiplicative(self, rng):
        """{φ∘m, ψ∘m}(g,h) = {φ,ψ}(gh)."""
        params = ModelParams(n=1, lam=0.6)
        for _ in range(5):
            g, h = random_g(rng, 1, 0.8), random_g(rng, 1, 0.8)
            assert poisson_lie_defect(coordinate(0), coordinate(1), g, h, params) < 1e-6
        phi = SmoothFunctional(lambda c: np.sin(c[0]) + c[1] * c[2])
        psi = SmoothFunctional(lambda c: c[0] * c[1])
        assert poisson_lie_defect(phi, psi, GElement([0.3], [0.1], 0.2), GElement([-0.4], [0.5], -0.1), params) < 1e-6


class TestSerialization:
    """Test JSON documents."""

    def test_tensor_roundtrip(self):
        """r survives JSON with exact entries."""
        r = classical_r_matrix(2)
        assert tensor_from_json(tensor_to_json(r)).equals(r)

    def test_algebra_json_lists_labels(self):
        """Structure-constant document carries labels and λ-power triples."""
        import json
        doc = json.loads(algebra_to_json(dual_g(1)))
        assert doc["labels"] == ["p1", "q1", "r"]
        assert [1, 1, 1] in [c for row in doc["constants"] for c in row[3]]
