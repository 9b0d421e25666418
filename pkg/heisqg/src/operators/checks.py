"""
Operator Checks - Hopf and R-matrix identities as callable defect checks

PURPOSE:
    Each function builds both sides of one identity from builders.py and
    returns a Defect: the worst discrepancy plus enough detail to
    reproduce it. Tolerances and labels are attached by the suite
    registry, not here.

    Symbolic identities (AffinePhaseOps on both sides) go through
    equal_randomized(). Identities involving Φ′ or a function operator
    L_φ go through the Gaussian-slice engine and are compared pointwise.

ARCHITECTURE ROLE:
    Called by suites/registry.py (pentagon, comultiplication, counit,
    antipode, rmatrix, qybe suites) and by the tests.

DEBUGGING NOTES:
    - R-matrix identities hold at ℏ = 1 only; the checks force it.
    - Gaussian checks draw slow coordinates from a small box so that
      function operators with compact r-support are nonzero there.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import sympy

from functions.closed_form import GaussianClosedForm
from functions.grid import Grid
from functions.hopf import dagger_closed_form
from functions.transforms import partial_fourier_vee
from groups.laws import GElement, g_mul, random_g
from groups.params import ModelParams
from operators.affine import (
    AffinePhaseOp,
    EqualityResult,
    adjoint,
    compose,
    compose_all,
    embed_legs,
    equal_randomized,
    flip,
    identity,
    is_unitary,
    multiplication_op,
    swap_legs,
    tensor,
)
from operators.builders import (
    build_block_dagger,
    build_block_realization,
    build_DeltaL,
    build_DeltaL_ext,
    build_DeltaOpL,
    build_function_operator,
    build_L_block,
    build_L_ext,
    build_Phi,
    build_Phi_mult_actions,
    build_PhiPrime_mult_actions,
    build_R_conjugated_DeltaL,
    build_T,
    build_U,
    build_U_ext,
    build_V,
    build_V_sigma,
    build_V_sigma_ext,
    build_W,
    build_W_ext,
    coproduct_by_conjugation,
    function_operator_kernel,
    hilbert_signature,
)
from operators.expr import LegSignature, as_vector, beta_expr, eta_expr, num, scale
from operators.gaussian import GaussianSliceVector, apply_chain, gaussian_integral, standard_gaussian
from operators.rmatrix import R_by_quadrature, build_R, function_Phi, function_PhiPrime, function_R
from utils.numerics import ebar, make_rng, relative_defect

logger = logging.getLogger(__name__)


@dataclass
class Defect:
    """Worst discrepancy of one identity."""
    defect: float
    detail: dict = field(default_factory=dict)


def _from_equality(res: EqualityResult, **detail) -> Defect:
    d = dict(detail)
    d.update({"witness": res.witness, "component": res.component})
    return Defect(res.max_defect, d)


def merge_defects(parts: dict) -> Defect:
    worst = max(parts.values()) if parts else 0.0
    return Defect(float(worst), dict(parts))


def random_block(rng: np.random.Generator, n: int, extended: bool = False, scale_: float = 1.0):
    """Random (a, b, c[, d]) with entries ~ U[-scale, scale]."""
    a = rng.uniform(-scale_, scale_, n)
    b = rng.uniform(-scale_, scale_, n)
    c = float(rng.uniform(-scale_, scale_))
    if extended:
        return a, b, c, float(rng.uniform(-scale_, scale_))
    return a, b, c


def random_lambdas(rng: np.random.Generator, count: int = 10, bound: float = 2.0) -> List[float]:
    """count values in [-bound, bound] away from 0."""
    out = []
    while len(out) < count:
        lam = float(rng.uniform(-bound, bound))
        if abs(lam) > 0.05:
            out.append(lam)
    return out


def gaussian_points(signature: LegSignature, rng: np.random.Generator, count: int,
                    fast_scale: float = 1.0, slow_scale: float = 0.3) -> np.ndarray:
    return signature.random_points(rng, count, fast_scale, slow_scale)


def vector_defect(lhs: GaussianSliceVector, rhs: GaussianSliceVector, X: np.ndarray) -> Defect:
    a, skipped_a = lhs.evaluate(X)
    b, skipped_b = rhs.evaluate(X)
    skipped = sorted(set(skipped_a) | set(skipped_b))
    keep = np.setdiff1d(np.arange(X.shape[0]), skipped)
    if keep.size == 0:
        return Defect(float("inf"), {"skipped": len(skipped)})
    return Defect(relative_defect(a[keep], b[keep]), {"skipped": len(skipped)})


# ═══════════════════════════════════════════════════════════════
# MULTIPLICATIVE UNITARIES
# ═══════════════════════════════════════════════════════════════

def pentagon_sides(U: AffinePhaseOp):
    U12 = embed_legs(U, (0, 1), 3)
    U13 = embed_legs(U, (0, 2), 3)
    U23 = embed_legs(U, (1, 2), 3)
    return compose_all(U12, U13, U23), compose(U23, U12)


def check_pentagon(params: ModelParams, lambdas: Optional[Sequence[float]] = None, trials: int = 100,
                   seed: int = 0, extended: bool = False) -> Defect:
    """U₁₂U₁₃U₂₃ = U₂₃U₁₂ over several λ (Ũ when extended)."""
    if lambdas is None:
        lambdas = random_lambdas(make_rng(seed, 1))
    parts = {}
    for k, lam in enumerate(lambdas):
        p = params.with_lambda(lam)
        U = build_U_ext(p) if extended else build_U(p)
        lhs, rhs = pentagon_sides(U)
        res = equal_randomized(lhs, rhs, trials, seed=seed + k)
        parts[f"lambda={lam:.6g}"] = res.max_defect
        logger.debug("pentagon at lambda=%.4f: %.3e", lam, res.max_defect)
    return merge_defects(parts)


def check_U_factorization(params: ModelParams, trials: int = 100, seed: int = 0) -> Defect:
    """U = W∘V_σ and Ũ = W̃∘Ṽ_σ."""
    plain = equal_randomized(build_U(params), compose(build_W(params), build_V_sigma(params)), trials, seed=seed)
    ext = equal_randomized(build_U_ext(params), compose(build_W_ext(params), build_V_sigma_ext(params)),
                           trials, seed=seed)
    return merge_defects({"U": plain.max_defect, "U~": ext.max_defect})


def check_unitarity(params: ModelParams, trials: int = 100, seed: int = 0) -> Defect:
    """compose(op, adjoint(op)) ≃ identity, and |amp|² = |det DS|."""
    ops = [build_U(params), build_V_sigma(params), build_V(params), build_W(params),
           build_U_ext(params), build_Phi(params), build_T(params)]
    parts = {}
    for op in ops:
        res = equal_randomized(compose(op, adjoint(op)), identity(op.signature), trials, seed=seed)
        parts[op.name] = res.max_defect if is_unitary(op, trials, seed=seed) else float("inf")
    return merge_defects(parts)


# ═══════════════════════════════════════════════════════════════
# COMULTIPLICATION, COUNIT
# ═══════════════════════════════════════════════════════════════

def check_DeltaL(block, params: ModelParams, trials: int = 100, seed: int = 0) -> Defect:
    """Closed-form ΔL vs U(L⊗1)U*, Δ^op L vs Σ(ΔL)Σ, and the extended Δ̃L vs Ũ(L̃⊗1)Ũ*."""
    a, b, c = block[:3]
    d = block[3] if len(block) > 3 else 0.3
    delta = build_DeltaL(a, b, c, params)
    conj = coproduct_by_conjugation(build_L_block(a, b, c, params), build_U(params))
    res = equal_randomized(delta, conj, trials, seed=seed)
    op = equal_randomized(build_DeltaOpL(a, b, c, params), flip(delta), trials, seed=seed)
    ext = equal_randomized(build_DeltaL_ext(a, b, c, d, params),
                           coproduct_by_conjugation(build_L_ext(a, b, c, d, params), build_U_ext(params)),
                           trials, seed=seed)
    out = _from_equality(res)
    out.detail.update({"DeltaL": res.max_defect, "DeltaOpL": op.max_defect, "DeltaL~": ext.max_defect})
    out.defect = max(res.max_defect, op.max_defect, ext.max_defect)
    return out


def check_L_composition(g, g2, params: ModelParams, trials: int = 100, seed: int = 0) -> Defect:
    """L_g∘L_g′ = ē[η(r)β(a,b′)]·L_{a+a′, b+b′, c+c′}."""
    lhs, rhs = _composition_sides(g, g2, params)
    return _from_equality(equal_randomized(lhs, rhs, trials, seed=seed))


def _composition_sides(g, g2, params: ModelParams):
    a, b, c = g
    a2, b2, c2 = g2
    n = params.n
    sig = hilbert_signature(params)
    r = sig.leg(0).r
    mult = multiplication_op(sig, params.hbar * eta_expr(params.lam, r) * beta_expr(as_vector(a, n), as_vector(b2, n)))
    total = build_L_block(np.add(a, a2), np.add(b, b2), c + c2, params)
    return compose(build_L_block(a, b, c, params), build_L_block(a2, b2, c2, params)), compose(mult, total)


def check_homomorphism(g, g2, params: ModelParams, trials: int = 100, seed: int = 0) -> Defect:
    """ΔL_g∘ΔL_g′ = U(ē[η(r)β(a,b′)]L_{g+g′} ⊗ 1)U*."""
    _, product = _composition_sides(g, g2, params)
    lhs = compose(build_DeltaL(*g, params), build_DeltaL(*g2, params))
    rhs = coproduct_by_conjugation(product, build_U(params))
    return _from_equality(equal_randomized(lhs, rhs, trials, seed=seed))


def check_coassociativity(block, params: ModelParams, trials: int = 100, seed: int = 0) -> Defect:
    """(Δ⊗id)ΔL = U₁₂(ΔL)₁₃U₁₂* equals (id⊗Δ)ΔL = U₂₃(ΔL)₁₂U₂₃*; plus the triple-product check."""
    U = build_U(params)
    Ustar = adjoint(U)
    delta = build_DeltaL(*block, params)
    lhs = compose_all(embed_legs(U, (0, 1), 3), embed_legs(delta, (0, 2), 3), embed_legs(Ustar, (0, 1), 3))
    rhs = compose_all(embed_legs(U, (1, 2), 3), embed_legs(delta, (0, 1), 3), embed_legs(Ustar, (1, 2), 3))
    out = _from_equality(equal_randomized(lhs, rhs, trials, seed=seed))
    rng = make_rng(seed, 2)
    worst = 0.0
    for _ in range(trials):
        g1, g2, g3 = (random_g(rng, params.n) for _ in range(3))
        left = g_mul(g_mul(g1, g2, params.lam), g3, params.lam)
        right = g_mul(g1, g_mul(g2, g3, params.lam), params.lam)
        worst = max(worst, float(abs(block_function(block, left) - block_function(block, right))))
    out.detail["triple_product"] = worst
    out.defect = max(out.defect, worst)
    return out


def block_function(block, g: GElement) -> complex:
    """L_{a,b,c}(p,q,r) = ē[p·a + q·b + rc]."""
    a, b, c = np.atleast_1d(block[0]), np.atleast_1d(block[1]), float(block[2])
    return complex(ebar(np.dot(g.p, a) + np.dot(g.q, b) + g.r * c))


def check_counit_blocks(block, params: ModelParams, trials: int = 100, seed: int = 0) -> Defect:
    """(id⊗ε)ΔL = L: the coproduct function L(g·g′) at g′ = e is L(g)."""
    rng = make_rng(seed, 3)
    unit = GElement(np.zeros(params.n), np.zeros(params.n), 0.0)
    worst = 0.0
    for _ in range(trials):
        g = random_g(rng, params.n)
        worst = max(worst, abs(block_function(block, g_mul(g, unit, params.lam)) - block_function(block, g)),
                    abs(block_function(block, g_mul(unit, g, params.lam)) - block_function(block, g)))
    return Defect(float(worst))


# ═══════════════════════════════════════════════════════════════
# T AND THE ANTIPODE
# ═══════════════════════════════════════════════════════════════

def check_T_involution(params: ModelParams, trials: int = 100, seed: int = 0) -> Defect:
    T = build_T(params)
    return _from_equality(equal_randomized(compose(T, T), identity(T.signature), trials, seed=seed))


def check_T_blocks(block, params: ModelParams, trials: int = 100, seed: int = 0) -> Defect:
    """
    T L_{a,b,c} T equals the realization of (L_{a,b,c})†, and that function
    agrees with the dagger formula conj φ(-e^{-λr}p, -e^{-λr}q, -r).
    """
    T = build_T(params)
    a, b, c = np.atleast_1d(block[0]).astype(float), np.atleast_1d(block[1]).astype(float), float(block[2])
    res = equal_randomized(compose_all(T, build_L_block(a, b, c, params), T),
                           build_block_dagger(a, b, c, params), trials, seed=seed)
    rng = make_rng(seed, 4)
    P = rng.uniform(-2.0, 2.0, (trials, 2 * params.n + 1))
    n = params.n
    p, q, r = P[:, :n], P[:, n:2 * n], P[:, -1]
    s = np.exp(-params.lam * r)
    formula = np.conj(ebar(-(s[:, None] * p) @ a - (s[:, None] * q) @ b - r * c))
    realized = ebar(s * (p @ a + q @ b) + r * c)
    out = _from_equality(res)
    out.detail["function_picture"] = float(np.max(np.abs(formula - realized)))
    out.defect = max(out.defect, out.detail["function_picture"])
    return out


def check_T_dagger_gaussian(phi: GaussianClosedForm, params: ModelParams, grid: Optional[Grid] = None,
                            trials: int = 16, seed: int = 0) -> Defect:
    """
    T L_φ T = L_{φ†} on Gaussian vectors, and the kernel of L_{φ†} against
    the grid transform of the sampled dagger.
    """
    sig = hilbert_signature(params)
    rng = make_rng(seed, 5)
    T = build_T(params)
    L_phi = build_function_operator(phi, params)
    L_dag = build_function_operator(phi, params, dagger=True)
    parts = {}
    for k in range(max(1, trials // 8)):
        v = standard_gaussian(sig, rng, name=f"xi{k}")
        X = gaussian_points(sig, rng, 8)
        parts[f"vector{k}"] = vector_defect(apply_chain([T, L_phi, T], v), apply_chain([L_dag], v), X).defect
    if grid is not None:
        vee = partial_fourier_vee(dagger_closed_form(phi, grid, params.lam))
        A, B, R = vee.grid.mesh()
        pts = np.stack([A, B, R], axis=-1).reshape(-1, 3)
        kernel = function_operator_kernel(phi, params, pts, dagger=True).reshape(A.shape)
        parts["kernel_vs_grid"] = relative_defect(vee.samples, kernel)
    return merge_defects(parts)


def check_block_antipode_flip(block, params: ModelParams, trials: int = 100, seed: int = 0) -> Defect:
    """(T⊗T)ΔL(T⊗T) = Σ Δ(L†) Σ on building blocks."""
    T = build_T(params)
    TT = tensor(T, T)
    swap = swap_legs(hilbert_signature(params, 2))
    lhs = compose_all(TT, build_DeltaL(*block, params), TT)
    rhs = compose_all(swap, coproduct_by_conjugation(build_block_dagger(*block, params), build_U(params)), swap)
    return _from_equality(equal_randomized(lhs, rhs, trials, seed=seed))


def check_antipode_flip(phi: GaussianClosedForm, params: ModelParams, trials: int = 4,
                        points: int = 8, seed: int = 0) -> Defect:
    """(T⊗T)(Δφ)(T⊗T)ξ = Σ(Δφ†)Σξ with Δφ = U(L_φ⊗1)U*, on Gaussian ξ."""
    sig = hilbert_signature(params, 2)
    T = build_T(params)
    TT = tensor(T, T)
    U = build_U(params)
    Ustar = adjoint(U)
    swap = swap_legs(sig)
    L1 = build_function_operator(phi, params).embedded((0,), 2)
    L1_dag = build_function_operator(phi, params, dagger=True).embedded((0,), 2)
    rng = make_rng(seed, 6)
    parts = {}
    for k in range(trials):
        v = standard_gaussian(sig, rng, name=f"xi{k}")
        X = gaussian_points(sig, rng, points)
        lhs = apply_chain([TT, U, L1, Ustar, TT], v)
        rhs = apply_chain([swap, U, L1_dag, Ustar, swap], v)
        parts[f"vector{k}"] = vector_defect(lhs, rhs, X).defect
    return merge_defects(parts)


# ═══════════════════════════════════════════════════════════════
# R-MATRIX
# ═══════════════════════════════════════════════════════════════

def _r_params(params: ModelParams) -> ModelParams:
    return params.with_hbar(1.0)


def check_almost_cocommutative(block, params: ModelParams, trials: int = 100, vectors: int = 4,
                               points: int = 8, seed: int = 0) -> Defect:
    """
    RΔ̃L R* = Δ̃^op L: closed form vs Σ(Δ̃L)Σ symbolically, then
    R(Δ̃L)R* vs Δ̃^op L on Gaussian vectors.
    """
    p = _r_params(params)
    a, b, c, d = block
    delta = build_DeltaL_ext(a, b, c, d, p)
    delta_op = flip(delta)
    sym = equal_randomized(build_R_conjugated_DeltaL(a, b, c, d, p), delta_op, trials, seed=seed)
    R = build_R(p)
    sig = delta.signature
    rng = make_rng(seed, 7)
    gauss = {}
    for k in range(vectors):
        v = standard_gaussian(sig, rng, name=f"xi{k}")
        X = gaussian_points(sig, rng, points)
        lhs = apply_chain([R, delta, R.adjoint], v)
        rhs = apply_chain([delta_op], v)
        gauss[f"vector{k}"] = vector_defect(lhs, rhs, X).defect
    out = _from_equality(sym)
    out.detail["symbolic"] = sym.max_defect
    out.detail["gaussian"] = max(gauss.values()) if gauss else 0.0
    out.defect = max(out.defect, out.detail["gaussian"])
    return out


def cocommutativity_witness(params: ModelParams, lam: float = 1e-3, trials: int = 100, seed: int = 0) -> Defect:
    """At small λ, Δ̃L and Δ̃^op L still differ for (a, b) ≠ 0."""
    p = params.with_lambda(lam)
    delta = build_DeltaL_ext(1.0, 1.0, 0.5, 0.3, p)
    return _from_equality(equal_randomized(delta, flip(delta), trials, seed=seed))


def check_qybe(params: ModelParams, trials: int = 20, points: int = 8, seed: int = 0) -> Defect:
    """R₁₂R₁₃R₂₃ = R₂₃R₁₃R₁₂ on random Gaussian vectors over three extended legs."""
    p = _r_params(params)
    R = build_R(p)
    R12, R13, R23 = R.embedded((0, 1), 3), R.embedded((0, 2), 3), R.embedded((1, 2), 3)
    sig = R12.phi.signature
    rng = make_rng(seed, 8)
    worst, skipped = 0.0, 0
    for k in range(trials):
        v = standard_gaussian(sig, rng, name=f"xi{k}")
        X = gaussian_points(sig, rng, points)
        d = vector_defect(apply_chain([R12, R13, R23], v), apply_chain([R23, R13, R12], v), X)
        worst = max(worst, d.defect)
        skipped += d.detail["skipped"]
    if skipped:
        logger.warning("QYBE: %d evaluation points fell on singular slices", skipped)
    return Defect(worst, {"vectors": trials, "skipped": skipped})


def check_quasitriangular(params: ModelParams, trials: int = 10, points: int = 8, seed: int = 0) -> Defect:
    """Ũ₂₃R₁₂Ũ₂₃* = R₁₃R₁₂ and Ũ₁₂R₁₃Ũ₁₂* = R₁₃R₂₃."""
    p = _r_params(params)
    R = build_R(p)
    R12, R13, R23 = R.embedded((0, 1), 3), R.embedded((0, 2), 3), R.embedded((1, 2), 3)
    U = build_U_ext(p)
    Ustar = adjoint(U)
    U12, U12s = embed_legs(U, (0, 1), 3), embed_legs(Ustar, (0, 1), 3)
    U23, U23s = embed_legs(U, (1, 2), 3), embed_legs(Ustar, (1, 2), 3)
    sig = U12.signature
    rng = make_rng(seed, 9)
    first = second = 0.0
    for k in range(trials):
        v = standard_gaussian(sig, rng, name=f"xi{k}")
        X = gaussian_points(sig, rng, points)
        first = max(first, vector_defect(apply_chain([U23, R12, U23s], v), apply_chain([R13, R12], v), X).defect)
        second = max(second, vector_defect(apply_chain([U12, R13, U12s], v), apply_chain([R13, R23], v), X).defect)
    return Defect(max(first, second), {"id_x_delta": first, "delta_x_id": second})


def check_R_partial_unitarity(params: ModelParams, trials: int = 4, points: int = 8, seed: int = 0) -> Defect:
    """R R* ≃ id and R* R ≃ id on Gaussian slices."""
    R = build_R(_r_params(params))
    sig = R.phi.signature
    rng = make_rng(seed, 10)
    worst = 0.0
    for k in range(trials):
        v = standard_gaussian(sig, rng, name=f"xi{k}")
        X = gaussian_points(sig, rng, points)
        worst = max(worst, vector_defect(apply_chain([R, R.adjoint], v), v, X).defect,
                    vector_defect(apply_chain([R.adjoint, R], v), v, X).defect)
    return Defect(worst)


def r21_witness(params: ModelParams, points: int = 8, seed: int = 0) -> Defect:
    """Distance between R₂₁ξ and R*ξ; large means R is not triangular."""
    R = build_R(_r_params(params))
    R21 = R.embedded((1, 0), 2)
    sig = R.phi.signature
    rng = make_rng(seed, 11)
    v = standard_gaussian(sig, rng)
    X = gaussian_points(sig, rng, points, fast_scale=1.0, slow_scale=1.0)
    d = vector_defect(apply_chain([R21], v), apply_chain([R.adjoint], v), X)
    d.detail["witness"] = X[0].tolist()
    return d


def check_R_quadrature(params: ModelParams, points: int = 8, seed: int = 0, **quad) -> Defect:
    """Gaussian-engine R v against trapezoid quadrature of the reduced Φ′ kernel (n = 1)."""
    p = _r_params(params)
    p.require_quantum("the reduced Phi' kernel")
    R = build_R(p)
    sig = R.phi.signature
    rng = make_rng(seed, 12)
    v = standard_gaussian(sig, rng)
    X = gaussian_points(sig, rng, points, fast_scale=1.0, slow_scale=1.0)
    engine = apply_chain([R], v)(X)
    oracle = R_by_quadrature(v, X, p, **quad)
    return Defect(relative_defect(engine, oracle), {"points": points})


def check_fresnel() -> Defect:
    """∫ e^{iπt²} dt = e^{iπ/4} through the regularized Gaussian formula."""
    value = np.exp(gaussian_integral(np.array([[-1j * np.pi]]), np.zeros(1)))
    expected = np.exp(1j * np.pi / 4)
    return Defect(float(abs(value - expected) / abs(expected)))


def multiplier_consistency(params: ModelParams, blocks=None, trials: int = 100, seed: int = 0) -> Defect:
    """
    Multiplier actions of Φ and Φ′ against their operator realizations.

    - ·Φ applied to the function Φ′ is the product function R;
    - Φ· applied to Φ′ gives ē[λ(rs'+r's)] ē[2λe^{-λr} p·q'], which is what
      the operator ΦΦ′ realizes;
    - Φ′· and ·Φ′ applied to 1 give the Φ′ function;
    - left and right Φ-actions commute;
    - Φ∘(L⊗L′) and (L⊗L′)∘Φ are the realizations of the left and right
      multiplier formulas applied to the block function.
    """
    p = _r_params(params)
    lam = p.lam
    rng = make_rng(seed, 13)
    actions = build_Phi_mult_actions(p)
    parts = {}
    if p.n == 1:
        X = actions.right.signature.random_points(rng, trials)
        PhiPrime = lambda P: function_PhiPrime(P, lam)  # noqa: E731
        parts["right_on_PhiPrime"] = relative_defect(actions.right.apply(PhiPrime, X), function_R(X, lam))
        realized = function_Phi(X, lam) * ebar(2 * lam * np.exp(-lam * X[:, 2]) * X[:, 0] * X[:, 5])
        parts["left_on_PhiPrime"] = relative_defect(actions.left.apply(PhiPrime, X), realized)
        primes = build_PhiPrime_mult_actions(p)
        ones = lambda P: np.ones(len(P), dtype=complex)  # noqa: E731
        parts["PhiPrime_unit_left"] = relative_defect(primes.left.apply(ones, X), PhiPrime(X))
        W = primes.right.signature.random_points(rng, trials)
        kt = 2 * lam * np.exp(-lam * W[:, 6] + W[:, 3] - W[:, 7])
        parts["PhiPrime_unit_right"] = relative_defect(primes.right.apply(ones, W), ebar(kt * W[:, 0] * W[:, 5]))
    parts["left_right_commute"] = equal_randomized(compose(actions.left, actions.right),
                                                   compose(actions.right, actions.left), trials, seed=seed).max_defect
    if blocks is None:
        blocks = (random_block(rng, p.n, True), random_block(rng, p.n, True))
    (a, b, c, d), (a2, b2, c2, d2) = blocks
    L = tensor(build_L_ext(a, b, c, d, p), build_L_ext(a2, b2, c2, d2, p))
    sig = L.signature
    r1, r2 = sig.leg(0).r, sig.leg(1).r
    n = p.n
    av, bv, av2, bv2 = (as_vector(t, n) for t in (a, b, a2, b2))
    e1, e2 = sympy.exp(sympy.Float(lam) * r1), sympy.exp(sympy.Float(lam) * r2)
    left = compose(
        build_block_realization(p, scale(e2, av), scale(1 / e2, bv), r1 * num(c), num(d) + lam * r2,
                                signature=sig, leg=0),
        build_block_realization(p, scale(e1, av2), scale(1 / e1, bv2), r2 * num(c2), num(d2) + lam * r1,
                                signature=sig, leg=1),
    )
    right = compose(
        build_block_realization(p, av, bv, r1 * num(c), num(d) + lam * r2, signature=sig, leg=0),
        build_block_realization(p, av2, bv2, r2 * num(c2), num(d2) + lam * r1, signature=sig, leg=1),
    )
    Phi = build_Phi(p)
    parts["left_realization"] = equal_randomized(compose(Phi, L), left, trials, seed=seed).max_defect
    parts["right_realization"] = equal_randomized(compose(L, Phi), right, trials, seed=seed).max_defect
    return merge_defects(parts)


def check_gaussian_engine(params: ModelParams, points: int = 64, seed: int = 0) -> Defect:
    """apply_affine agrees with pointwise application for U, ΔL, T, Φ."""
    rng = make_rng(seed, 14)
    block = random_block(rng, params.n)
    ops = [build_U(params), build_DeltaL(*block, params), build_T(params), build_Phi(params.with_hbar(1.0))]
    parts = {}
    for op in ops:
        v = standard_gaussian(op.signature, rng)
        X = gaussian_points(op.signature, rng, points)
        parts[op.name] = relative_defect(apply_chain([op], v)(X), op.apply(v, X))
    return merge_defects(parts)


def check_R_classical(params: ModelParams, trials: int = 100, seed: int = 0) -> Defect:
    """At λ = 0 both factors of R are trivial: Φ = id and R ≡ 1 as a function."""
    p = _r_params(params).with_lambda(0.0)
    phi = build_Phi(p)
    res = equal_randomized(phi, identity(phi.signature), trials, seed=seed)
    out = _from_equality(res)
    if p.n == 1:
        X = LegSignature(1, 2, "pqrs").random_points(make_rng(seed, 15), trials)
        out.detail["function"] = float(np.max(np.abs(function_R(X, 0.0) - 1.0)))
        out.defect = max(out.defect, out.detail["function"])
    return out
