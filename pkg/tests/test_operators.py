"""
Unit tests for the operator engine: leg signatures, the affine phase
calculus, Gaussian slices, multiplicative unitaries, coproducts and T.
"""

import json
import sys
from pathlib import Path

import numpy as np
import pytest
import sympy

# Add src to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / 'heisqg' / 'src'))

from groups.params import ModelParams
from operators.affine import (
    AffinePhaseOp,
    adjoint,
    compose,
    embed_legs,
    equal_randomized,
    flip,
    identity,
    inverse,
    is_unitary,
    structure,
    swap_legs,
    tensor,
)
from operators.builders import (
    build_DeltaL,
    build_L_block,
    build_T,
    build_U,
    build_U_ext,
    build_V,
    build_V_sigma,
    build_function_operator,
    hilbert_signature,
)
from operators.checks import (
    check_antipode_flip,
    check_block_antipode_flip,
    check_coassociativity,
    check_counit_blocks,
    check_DeltaL,
    check_fresnel,
    check_gaussian_engine,
    check_homomorphism,
    check_L_composition,
    check_pentagon,
    check_T_blocks,
    check_T_dagger_gaussian,
    check_T_involution,
    check_U_factorization,
    check_unitarity,
)
from operators.expr import LegSignature, leg_renaming
from operators.gaussian import (
    apply_affine,
    apply_chain,
    gaussian_integral,
    QuadraticFourierOp,
    standard_gaussian,
)
from utils.errors import SignatureError, SingularSliceError, UnsupportedOperatorError

BLOCK = (np.array([0.7]), np.array([-0.4]), 0.3)
BLOCK2 = (np.array([-0.2]), np.array([0.5]), -0.6)


class TestLegSignature:
    """Test coordinate bookkeeping."""

    def test_dimensions(self):
        """xyr legs have 2n+1 coordinates, extended legs 2n+2."""
        assert LegSignature(1, 2, "xyr").dim == 6
        assert LegSignature(2, 3, "xyrw").dim == 18

    def test_unknown_picture(self):
        """Unknown picture tags are rejected."""
        with pytest.raises(SignatureError):
            LegSignature(1, 1, "abc")

    def test_fast_and_slow_partition(self):
        """fast_index and slow_index cover every coordinate once."""
        sig = LegSignature(2, 2, "xyrw")
        both = np.sort(np.concatenate([sig.fast_index, sig.slow_index]))
        assert np.array_equal(both, np.arange(sig.dim))

    def test_repeated_leg_rejected(self):
        """A leg cannot be embedded twice."""
        src = LegSignature(1, 2)
        with pytest.raises(SignatureError):
            leg_renaming(src, src.with_legs(3), (1, 1))

    def test_error_is_value_error(self):
        """Signature problems are also ValueErrors."""
        with pytest.raises(ValueError):
            LegSignature(0, 1)


class TestAffineCalculus:
    """Test composition, inversion and comparison of AffinePhaseOps."""

    def test_identity_is_neutral(self, params):
        """id∘U = U∘id = U."""
        U = build_U(params)
        assert equal_randomized(compose(identity(U.signature), U), U).equal
        assert equal_randomized(compose(U, identity(U.signature)), U).equal

    def test_inverse(self, params):
        """U∘U⁻¹ = id."""
        U = build_U(params)
        assert equal_randomized(compose(U, inverse(U)), identity(U.signature)).equal

    def test_adjoint_of_unitary_is_inverse(self, params):
        """For unitary U the adjoint equals the inverse."""
        U = build_U(params)
        assert is_unitary(U)
        assert equal_randomized(adjoint(U), inverse(U)).equal

    def test_nonunitary_detected(self, params):
        """Scaling the amplitude breaks unitarity."""
        U = build_U(params)
        scaled = AffinePhaseOp(U.signature, U.substitution, 2 * U.amplitude, U.phase)
        assert not is_unitary(scaled)

    def test_different_blocks_differ(self, params):
        """Different building blocks are told apart, with a witness."""
        res = equal_randomized(build_L_block(*BLOCK, params), build_L_block(*BLOCK2, params))
        assert not res.equal
        assert res.witness is not None
        assert len(res.witness) == 3

    def test_linear_vs_antilinear(self, params):
        """A linear and an antilinear operator are never equal."""
        T = build_T(params)
        res = equal_randomized(T, identity(T.signature))
        assert not res.equal
        assert res.component == "antilinear"

    def test_signature_mismatch(self, params):
        """Operators on different leg counts cannot be composed."""
        with pytest.raises(SignatureError):
            compose(build_U(params), build_L_block(*BLOCK, params))

    def test_embed_and_flip(self, params):
        """flip(flip(A)) = A and embed_legs((1, 0)) is the flip."""
        D = build_DeltaL(*BLOCK, params)
        assert equal_randomized(flip(flip(D)), D).equal
        assert equal_randomized(embed_legs(D, (1, 0), 2), flip(D)).equal

    def test_flip_is_swap_conjugation(self, params):
        """ΣAΣ by composition agrees with relabelling the legs."""
        D = build_DeltaL(*BLOCK, params)
        swap = swap_legs(D.signature)
        assert equal_randomized(compose(swap, compose(D, swap)), flip(D)).equal

    def test_embedded_name(self, params):
        """Embedded operators carry their leg label."""
        assert embed_legs(build_U(params), (0, 2), 3).name == "U_13"

    def test_tensor_of_antilinear(self, params):
        """(T⊗T)² = id."""
        TT = tensor(build_T(params), build_T(params))
        assert TT.antilinear
        assert equal_randomized(compose(TT, TT), identity(TT.signature)).equal

    def test_json_round_trip(self, params):
        """A descriptor survives JSON."""
        U = build_U(params)
        doc = json.loads(U.to_json())
        assert doc["kind"] == "affine"
        assert equal_randomized(AffinePhaseOp.from_json(U.to_json()), U).equal

    def test_from_dict_rejects_other_kinds(self):
        """Only affine descriptors load."""
        with pytest.raises(UnsupportedOperatorError):
            AffinePhaseOp.from_dict({"kind": "quadratic"})

    def test_nonaffine_structure(self):
        """A quadratic fast substitution has no affine structure."""
        sig = LegSignature(1, 1, "xyr")
        x, y, r = sig.symbols
        op = AffinePhaseOp(sig, (x ** 2, y, r))
        with pytest.raises(UnsupportedOperatorError):
            structure(op)


class TestMultiplicativeUnitaries:
    """Test U, Ũ and their factors."""

    def test_pentagon(self, params):
        """U₁₂U₁₃U₂₃ = U₂₃U₁₂ for several λ."""
        assert check_pentagon(params, lambdas=[1.0, -0.7, 1.9], trials=50).defect < 1e-9

    def test_pentagon_extended(self, params):
        """Ũ satisfies the pentagon equation too."""
        assert check_pentagon(params, lambdas=[0.8, -1.3], trials=50, extended=True).defect < 1e-9

    def test_pentagon_two_dimensional(self):
        """The identity does not depend on n."""
        p = ModelParams(n=2, lam=0.6, hbar=1.0)
        assert check_pentagon(p, lambdas=[0.6], trials=30).defect < 1e-9

    def test_factorization(self, params):
        """U = W V_σ and Ũ = W̃ Ṽ_σ."""
        assert check_U_factorization(params).defect < 1e-9

    def test_unitarity(self, params):
        """Every named operator is unitary or antiunitary."""
        result = check_unitarity(params, trials=50)
        assert result.defect < 1e-9
        assert "T" in result.detail

    def test_classical_limit_of_U(self):
        """At λ = 0, U coincides with V_σ and with V."""
        p = ModelParams(n=1, lam=0.0, hbar=0.5)
        assert equal_randomized(build_U(p), build_V_sigma(p)).equal
        assert equal_randomized(build_U(p), build_V(p)).equal

    def test_hbar_dependence(self, params):
        """U depends on ℏ through the phase."""
        res = equal_randomized(build_U(params), build_U(params.with_hbar(0.5)))
        assert not res.equal
        assert res.component == "factor"


class TestCoproduct:
    """Test ΔL against its conjugation form and the group law."""

    def test_closed_form_matches_conjugation(self, params):
        """ΔL = U(L⊗1)U*, Δ^op L = ΣΔLΣ, and the extended form."""
        result = check_DeltaL(BLOCK, params)
        assert result.defect < 1e-9
        assert set(result.detail) >= {"DeltaL", "DeltaOpL", "DeltaL~"}

    @pytest.mark.parametrize("lam", [0.3, -1.2])
    def test_closed_form_other_lambdas(self, params, lam):
        """The transcription holds away from λ = 1."""
        assert check_DeltaL(BLOCK2 + (0.2,), params.with_lambda(lam)).defect < 1e-9

    def test_block_composition(self, params):
        """L_g L_g′ = ē[η(r)β(a,b′)] L_{g+g′}."""
        assert check_L_composition(BLOCK, BLOCK2, params).defect < 1e-9

    def test_homomorphism(self, params):
        """Δ is multiplicative on building blocks."""
        assert check_homomorphism(BLOCK, BLOCK2, params).defect < 1e-9

    def test_coassociativity(self, params):
        """(Δ⊗id)Δ = (id⊗Δ)Δ on building blocks."""
        result = check_coassociativity(BLOCK, params, trials=50)
        assert result.defect < 1e-9
        assert result.detail["triple_product"] < 1e-12

    def test_counit(self, params):
        """(id⊗ε)ΔL = L = (ε⊗id)ΔL."""
        assert check_counit_blocks(BLOCK, params).defect < 1e-12

    def test_coproduct_is_not_cocommutative(self, params):
        """ΔL differs from its flip for λ ≠ 0."""
        D = build_DeltaL(*BLOCK, params)
        assert not equal_randomized(D, flip(D)).equal


class TestInvolutionT:
    """Test the antiunitary T and the antipode identities."""

    def test_involution(self, params):
        """T² = id."""
        assert check_T_involution(params).defect < 1e-9

    @pytest.mark.parametrize("hbar", [1.0, 0.3])
    def test_blocks(self, params, hbar):
        """T L T = L† on building blocks, for any ℏ."""
        result = check_T_blocks(BLOCK, params.with_hbar(hbar))
        assert result.defect < 1e-9

    def test_gaussian_dagger(self, params, grid, gaussian_pair):
        """T L_φ T = L_{φ†} on Gaussian vectors; kernel matches the grid transform."""
        phi, _ = gaussian_pair
        result = check_T_dagger_gaussian(phi, params, grid, trials=16)
        assert result.detail["vector0"] < 1e-9
        assert result.detail["kernel_vs_grid"] < 1e-6

    def test_block_antipode_flip(self, params):
        """(T⊗T)ΔL(T⊗T) = ΣΔ(L†)Σ."""
        assert check_block_antipode_flip(BLOCK, params).defect < 1e-9

    def test_gaussian_antipode_flip(self, params, gaussian_pair):
        """(T⊗T)Δφ(T⊗T) = ΣΔ(φ†)Σ on Gaussian vectors."""
        phi, _ = gaussian_pair
        assert check_antipode_flip(phi, params, trials=2).defect < 1e-8


class TestGaussianEngine:
    """Test the slice-wise Gaussian calculus."""

    def test_fresnel(self):
        """∫ e^{iπt²} dt = e^{iπ/4}."""
        assert check_fresnel().defect < 1e-12

    def test_real_gaussian_integral(self):
        """∫ exp(-v²) dv = √π."""
        assert np.exp(gaussian_integral(np.array([[1.0]]), np.zeros(1))) == pytest.approx(np.sqrt(np.pi))

    def test_singular_form(self):
        """A degenerate quadratic form is reported, not integrated."""
        with pytest.raises(SingularSliceError):
            gaussian_integral(np.zeros((2, 2)), np.zeros(2))

    def test_affine_matches_pointwise(self, params):
        """apply_affine reproduces pointwise application."""
        assert check_gaussian_engine(params, points=32).defect < 1e-12

    def test_unitary_preserves_positivity(self, params, rng):
        """Re Q stays positive definite under U."""
        sig = hilbert_signature(params, 2)
        v = apply_affine(build_U(params), standard_gaussian(sig, rng))
        assert v.min_real_eigenvalue(np.array([0.1, -0.2])) > 0

    def test_chain_order(self, params, rng):
        """apply_chain([A, B]) applies B first."""
        sig = hilbert_signature(params, 2)
        v = standard_gaussian(sig, rng)
        U = build_U(params)
        D = build_DeltaL(*BLOCK, params)
        X = sig.random_points(rng, 8, 1.0, 0.3)
        expected = U.apply(lambda Y: D.apply(v, Y), X)
        assert np.allclose(apply_chain([U, D], v)(X), expected, rtol=1e-10, atol=1e-14)

    def test_signature_mismatch(self, params, rng):
        """Operators refuse vectors on other signatures."""
        v = standard_gaussian(hilbert_signature(params, 1), rng)
        with pytest.raises(SignatureError):
            apply_affine(build_U(params), v)

    def test_function_operator_is_quadratic(self, params, gaussian_pair):
        """L_φ needs an integral and has two auxiliary variables per leg."""
        phi, _ = gaussian_pair
        op = build_function_operator(phi, params)
        assert isinstance(op, QuadraticFourierOp)
        assert len(op.aux) == 2

    def test_multi_term_rejected(self, params):
        """Function operators need a single Gaussian term."""
        from functions.closed_form import zero_at_origin_function
        with pytest.raises(UnsupportedOperatorError):
            build_function_operator(zero_at_origin_function(), params)

    def test_extended_unitary_on_gaussians(self, params, rng):
        """Ũ Ũ* v = v on extended slices."""
        U = build_U_ext(params)
        sig = U.signature
        v = standard_gaussian(sig, rng)
        X = sig.random_points(rng, 8, 1.0, 0.3)
        assert np.allclose(apply_chain([U, adjoint(U)], v)(X), v(X), rtol=1e-10, atol=1e-14)

    def test_symbols_are_real(self, params):
        """Coordinates are real symbols, so conjugation leaves them alone."""
        x = hilbert_signature(params).symbols[0]
        assert sympy.conjugate(x) == x
