"""
Suite Registry - Named verification suites

PURPOSE:
    Maps each suite name to a runner that fills a SuiteReport with
    CheckResult rows. run_suite() adds timing and turns an unexpected
    exception into a failing row, so one broken suite never hides the
    others.

    Suites and what they check:

        lie               classical r-matrix, dual brackets, cocycles, Poisson-Lie
        groups            associativity and inverses for H, H̃, G, G̃; η identity
        algebra           deformed product: associativity, oracle, involution
        pentagon          pentagon equation for U and Ũ, factorization, unitarity
        comultiplication  ΔL closed forms, coassociativity, the kernel F
        counit            ε by two routes, multiplicativity, (id⊗ε)Δ = id
        antipode          T, κ, the antipode axiom and the flip identity
        haar              trace property, left invariance, non-unimodularity
        rmatrix           RΔR* = Δ^op, quasitriangularity, R21 ≠ R*
        qybe              R₁₂R₁₃R₂₃ = R₂₃R₁₃R₁₂
        limits            ℏ → 0 and λ → 0 sweeps, commutator oracle

ARCHITECTURE ROLE:
    Called by the CLI. Suites run one after another in the configured
    order; every random choice comes from make_rng(cfg.seed, stream), so
    a fixed seed reproduces every defect bit for bit.

DEBUGGING NOTES:
    - A row named "<suite>.error" carries the exception text in its anchor
      and the traceback in the log.
    - Witness rows (r21, cocommutativity, haar.witness) pass when the
      defect is ABOVE the tolerance.
"""

import logging
import time
from pathlib import Path
from typing import Callable, Dict, List, Tuple

import numpy as np
import pandas as pd
import sympy

from config.loader import RunConfig
from functions.closed_form import gaussian_test_function, zero_at_origin_function
from functions.hopf import antipode, counit, counit_defect, haar_witness
from functions.limits import (
    commuting_pair,
    default_two_leg_function,
    r_classical_limit_defects,
    semiclassical_defect,
    semiclassical_pair,
    verify_commutator_against_oracle,
)
from functions.product import (
    deformed_mul,
    direct_product_oracle,
    involution,
    operator_norm_estimate,
    sigma_cocycle_defect,
)
from groups.laws import (
    associativity_defect,
    eta_identity_defect,
    eta_identity_scale,
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
from lie.algebras import exact
from lie.poisson import PoissonPoint, SmoothFunctional, coordinate, jacobi_defect, poisson_lie_defect
from lie.tensors import (
    LieTensor,
    ad_invariance_defect,
    classical_r_matrix,
    cocycle_F_defect,
    cocycle_law_defect,
    cybe_defect,
    dual_bracket_defects,
    theta_pairing_defects,
)
from operators.checks import (
    check_almost_cocommutative,
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
    check_qybe,
    check_quasitriangular,
    check_R_classical,
    check_R_partial_unitarity,
    check_R_quadrature,
    check_T_blocks,
    check_T_dagger_gaussian,
    check_T_involution,
    check_U_factorization,
    check_unitarity,
    cocommutativity_witness,
    multiplier_consistency,
    r21_witness,
    random_block,
    random_lambdas,
)
from suites.kernels import (
    check_antipode_axiom,
    check_comultiplication_kernel,
    check_haar_left_invariance,
    check_haar_trace,
    check_kernel_classical_reduction,
    check_kernel_support,
    default_kernel_pair,
    persist_haar_witness,
)
from suites.report import CheckResult, SuiteReport, run_params, sweep_table, write_sweep
from utils.errors import OracleDisagreementError
from utils.numerics import make_rng, relative_defect, relative_l2, successive_ratios

logger = logging.getLogger(__name__)

SuiteRunner = Callable[[RunConfig, SuiteReport], None]
SUITES: Dict[str, SuiteRunner] = {}

EXACT_DIMENSIONS = (1, 2, 3)
EXACT_LAMBDAS = (sympy.Integer(1), sympy.Integer(-1), sympy.Rational(1, 2))
GROUP_TRIALS = 1000


def suite(name: str):
    """Registers a runner under name."""
    def register(fn: SuiteRunner) -> SuiteRunner:
        SUITES[name] = fn
        return fn
    return register


def _nonzero(t: LieTensor) -> int:
    return sum(1 for v in t.coeffs.values() if sympy.expand(v) != 0)


def _below(rep: SuiteReport, cfg: RunConfig, name: str, anchor: str, defect: float, family: str):
    rep.add(CheckResult.below(f"{rep.suite}.{name}", anchor, defect, cfg.tol(family)))


def _above(rep: SuiteReport, cfg: RunConfig, name: str, anchor: str, defect: float, family: str):
    rep.add(CheckResult.above(f"{rep.suite}.{name}", anchor, defect, cfg.tol(family)))


def grid_pair():
    """Gaussian pair whose r-bumps fit the default grid."""
    phi = gaussian_test_function(width=1.0, center=(0.2, -0.1), wave=(0.1, 0.0), bump_radius=0.4, name="phi")
    psi = gaussian_test_function(width=1.3, center=(-0.15, 0.25), wave=(0.0, -0.2), bump_radius=0.4, name="psi")
    return phi, psi


# ═══════════════════════════════════════════════════════════════
# CLASSICAL LEVEL
# ═══════════════════════════════════════════════════════════════

@suite("lie")
def run_lie(cfg: RunConfig, rep: SuiteReport):
    lams = EXACT_LAMBDAS + (exact(cfg.params.lam),)
    cybe = dual = 0
    for n in EXACT_DIMENSIONS:
        for lam in lams:
            r = classical_r_matrix(n, lam)
            cybe += _nonzero(cybe_defect(r))
            for extended in (False, True):
                dual += sum(_nonzero(t) for t in dual_bracket_defects(r, extended).values())
    _below(rep, cfg, "cybe", "[r₁₂,r₁₃] + [r₁₂,r₂₃] + [r₁₃,r₂₃] = 0 for r = λ Σ x_i∧y_i", cybe, "exact")
    _below(rep, cfg, "dual_bracket", "δ(X) = ad_X r reproduces the brackets of 𝔤 and 𝔤̃", dual, "exact")

    cocycle = theta_count = ad_inv = 0
    for n in EXACT_DIMENSIONS:
        r = classical_r_matrix(n, exact(cfg.params.lam))
        cocycle += sum(_nonzero(t) for t in cocycle_law_defect(r).values())
        theta_count += len(theta_pairing_defects(n))
        ad_inv += sum(_nonzero(t) for t in ad_invariance_defect(r + r.flip()).values())
    _below(rep, cfg, "cocycle_law", "δ([X,Y]) = ad_X δ(Y) - ad_Y δ(X)", cocycle, "exact")
    _below(rep, cfg, "theta_pairing", "⟨θ(μ), X⊗Y⟩ = ⟨μ, [X,Y]⟩", theta_count, "exact")
    _below(rep, cfg, "ad_invariance", "r + r₂₁ is ad-invariant", ad_inv, "exact")

    rng = make_rng(cfg.seed, 21)
    lam = cfg.params.lam
    if lam != 0.0:
        worst = max(cocycle_F_defect(float(r1), float(r2), lam) for r1, r2 in rng.uniform(-1.5, 1.5, (20, 2)))
        _below(rep, cfg, "group_cocycle", "F(r₁+r₂) = F(r₁) + e^{-2λr₁}F(r₂)", worst, "group_law")

    nonlinear = (SmoothFunctional(lambda c: np.sin(c[0]) * c[1]),
                 SmoothFunctional(lambda c: c[1] ** 2 + c[0] * c[2]),
                 SmoothFunctional(lambda c: np.cos(c[0] + c[1]) * c[2]))
    jac = 0.0
    for _ in range(10):
        pt = PoissonPoint(rng.uniform(-0.8, 0.8, 3))
        jac = max(jac, jacobi_defect(coordinate(0), coordinate(1), coordinate(2), pt, cfg.params),
                  jacobi_defect(*nonlinear, pt, cfg.params))
    _below(rep, cfg, "jacobi", "{φ,{ψ,χ}} + cyclic = 0 for the dual Poisson bracket", jac, "poisson")

    pl = 0.0
    for _ in range(10):
        g, h = random_g(rng, 1, 0.8), random_g(rng, 1, 0.8)
        pl = max(pl, poisson_lie_defect(coordinate(0), coordinate(1), g, h, cfg.params),
                 poisson_lie_defect(nonlinear[0], nonlinear[1], g, h, cfg.params))
    _below(rep, cfg, "poisson_lie", "{φ∘m, ψ∘m}(g,h) = {φ,ψ}(gh)", pl, "poisson")


@suite("groups")
def run_groups(cfg: RunConfig, rep: SuiteReport):
    n, lam = cfg.params.n, cfg.params.lam
    rng = make_rng(cfg.seed, 22)
    laws = {
        "H": (heis_mul, heis_inv, heis_identity(n), lambda: random_heis(rng, n)),
        "H~": (ext_heis_mul, ext_heis_inv, ext_heis_identity(n), lambda: random_ext_heis(rng, n)),
        "G": (lambda a, b: g_mul(a, b, lam), lambda a: g_inv(a, lam), g_identity(n), lambda: random_g(rng, n)),
        "G~": (lambda a, b: ext_g_mul(a, b, lam), lambda a: ext_g_inv(a, lam), ext_g_identity(n),
               lambda: random_ext_g(rng, n)),
    }
    for label, (mul, inv, unit, draw) in laws.items():
        assoc = inverse = 0.0
        for _ in range(GROUP_TRIALS):
            a, b, c = draw(), draw(), draw()
            assoc = max(assoc, associativity_defect(mul, a, b, c))
            inverse = max(inverse, inverse_defect(mul, inv, unit, a))
        tag = label.replace("~", "_ext")
        _below(rep, cfg, f"{tag}.associativity", f"(ab)c = a(bc) in {label}", assoc, "group_law")
        _below(rep, cfg, f"{tag}.inverse", f"a·a⁻¹ = a⁻¹·a = e in {label}", inverse, "group_law")

    ulp, worst = np.finfo(float).eps, 0.0
    for r, rp in rng.uniform(-2.0, 2.0, (GROUP_TRIALS, 2)):
        scale = eta_identity_scale(lam, r, rp)
        if scale:
            worst = max(worst, eta_identity_defect(lam, r, rp) / (ulp * scale))
    _below(rep, cfg, "eta_identity", "e^{-2λr'}η(r+r') - e^{-2λr'}η(r') = η(r), in ulps", worst, "eta_ulps")


# ═══════════════════════════════════════════════════════════════
# FUNCTION ALGEBRA
# ═══════════════════════════════════════════════════════════════

@suite("algebra")
def run_algebra(cfg: RunConfig, rep: SuiteReport):
    params, grid = cfg.params, cfg.grid
    phi, psi = grid_pair()
    a, b = phi.sample(grid), psi.sample(grid)
    if not (a.check_support() and b.check_support()):
        logger.warning("test functions are not negligible at the edge of %s", grid)

    ab = deformed_mul(a, b, params)
    left = deformed_mul(ab, a, params)
    right = deformed_mul(a, deformed_mul(b, a, params), params)
    _below(rep, cfg, "associativity", "(φ×ψ)×φ = φ×(ψ×φ)", relative_l2(left.samples, right.samples),
           "associativity")
    oracle = direct_product_oracle(phi, psi, grid, params)
    _below(rep, cfg, "direct_formula", "FFT pipeline matches the double-integral product formula",
           relative_l2(ab.samples, oracle.samples), "product_oracle")
    _below(rep, cfg, "engines", "fft and direct twisted convolution agree",
           relative_l2(deformed_mul(a, b, params, "direct").samples, ab.samples), "fft_direct")

    star = involution(ab, params)
    reversed_ = deformed_mul(involution(b, params), involution(a, params), params)
    _below(rep, cfg, "involution", "(φ×ψ)* = ψ*×φ*", relative_l2(star.samples, reversed_.samples), "involution")
    _below(rep, cfg, "involutive", "(φ*)* = φ",
           relative_l2(involution(involution(a, params), params).samples, a.samples), "involutive")

    flat = params.with_hbar(0.0)
    pointwise = deformed_mul(a, b, flat).samples
    _below(rep, cfg, "hbar_zero", "ℏ = 0 collapses × to the pointwise product",
           relative_defect(pointwise, a.samples * b.samples), "hbar_zero")

    rng = make_rng(cfg.seed, 23)
    worst = 0.0
    for _ in range(100):
        h1, h2, h3 = rng.uniform(-2, 2, (3, 2))
        worst = max(worst, sigma_cocycle_defect(h1, h2, h3, float(rng.uniform(-1, 1)), params))
    _below(rep, cfg, "sigma_cocycle", "σ^r(h₁,h₂)σ^r(h₁+h₂,h₃) = σ^r(h₁,h₂+h₃)σ^r(h₂,h₃)", worst, "group_law")

    est, bound = operator_norm_estimate(a, params, iterations=20, seed=cfg.seed)
    _below(rep, cfg, "operator_norm", "‖L_φ‖ ≤ sup_r ‖φ^∨(·,·,r)‖_{L¹}", max(0.0, est / bound - 1.0),
           "operator_norm")


@suite("counit")
def run_counit(cfg: RunConfig, rep: SuiteReport):
    params, grid = cfg.params, cfg.grid
    phi, psi = grid_pair()
    a, b = phi.sample(grid), psi.sample(grid)
    _below(rep, cfg, "two_routes", "φ(0,0,0) = ∫ φ^∨(x,y,0) dx dy", counit_defect(a), "counit_routes")
    lhs = counit(deformed_mul(a, b, params))
    rhs = counit(a) * counit(b)
    _below(rep, cfg, "multiplicative", "ε(φ×ψ) = ε(φ)ε(ψ)", abs(lhs - rhs) / abs(rhs), "counit")
    _below(rep, cfg, "zero_at_origin", "ε vanishes on a function vanishing at the origin",
           abs(counit(zero_at_origin_function().sample(grid))), "hbar_zero")
    block = random_block(make_rng(cfg.seed, 24), params.n)
    _below(rep, cfg, "blocks", "(id⊗ε)ΔL = L = (ε⊗id)ΔL on building blocks",
           check_counit_blocks(block, params, seed=cfg.seed).defect, "counit_exact")


# ═══════════════════════════════════════════════════════════════
# OPERATOR LEVEL
# ═══════════════════════════════════════════════════════════════

@suite("pentagon")
def run_pentagon(cfg: RunConfig, rep: SuiteReport):
    params = cfg.params
    trials = int(cfg.option("pentagon", "trials", 100))
    lambdas = [params.lam] + random_lambdas(make_rng(cfg.seed, 25), int(cfg.option("pentagon", "lambdas", 10)))
    _below(rep, cfg, "U", "U₁₂U₁₃U₂₃ = U₂₃U₁₂",
           check_pentagon(params, lambdas, trials, cfg.seed).defect, "pentagon")
    _below(rep, cfg, "U_ext", "Ũ₁₂Ũ₁₃Ũ₂₃ = Ũ₂₃Ũ₁₂",
           check_pentagon(params, lambdas, trials, cfg.seed, extended=True).defect, "pentagon")
    _below(rep, cfg, "factorization", "U = W∘V_σ and Ũ = W̃∘Ṽ_σ",
           check_U_factorization(params, trials, cfg.seed).defect, "pentagon")
    _below(rep, cfg, "unitarity", "UU* = id for U, V_σ, V, W, Ũ, Φ, T",
           check_unitarity(params, trials, cfg.seed).defect, "pentagon")
    _below(rep, cfg, "gaussian_engine", "affine action on Gaussians matches pointwise application",
           check_gaussian_engine(params, seed=cfg.seed).defect, "gaussian_engine")


@suite("comultiplication")
def run_comultiplication(cfg: RunConfig, rep: SuiteReport):
    params = cfg.params
    trials = int(cfg.option("comultiplication", "trials", 100))
    rng = make_rng(cfg.seed, 26)
    block, block2 = random_block(rng, params.n, extended=True), random_block(rng, params.n)
    _below(rep, cfg, "DeltaL", "ΔL = U(L⊗1)U*, Δ^op L = ΣΔLΣ, Δ̃L = Ũ(L̃⊗1)Ũ*",
           check_DeltaL(block, params, trials, cfg.seed).defect, "coproduct")
    _below(rep, cfg, "L_composition", "L_g L_g' = ē[η(r)β(a,b')] L_{g+g'}",
           check_L_composition(block[:3], block2, params, trials, cfg.seed).defect, "coproduct")
    _below(rep, cfg, "homomorphism", "Δ(L_g L_g') = ΔL_g ΔL_g'",
           check_homomorphism(block[:3], block2, params, trials, cfg.seed).defect, "coproduct")
    _below(rep, cfg, "coassociativity", "(Δ⊗id)Δ = (id⊗Δ)Δ",
           check_coassociativity(block[:3], params, trials, cfg.seed).defect, "coproduct")

    if params.n != 1:
        logger.info("comultiplication kernel checks need n = 1; skipped for n = %d", params.n)
        return
    phi, psi = default_kernel_pair()
    vectors = int(cfg.option("comultiplication", "vectors", 4))
    _below(rep, cfg, "kernel", "U(L_φ⊗1)U*(1⊗L_ψ) is the integral operator with kernel F",
           check_comultiplication_kernel(phi, psi, params, vectors, seed=cfg.seed).defect, "comultiplication_kernel")
    _below(rep, cfg, "kernel_support", "F vanishes for r' outside the support of ψ",
           check_kernel_support(phi, params, seed=cfg.seed).defect, "comultiplication_kernel")
    _below(rep, cfg, "kernel_classical", "at λ = 0 F reduces to the Heisenberg-group kernel",
           check_kernel_classical_reduction(phi, psi, params, seed=cfg.seed).defect, "comultiplication_kernel")


@suite("antipode")
def run_antipode(cfg: RunConfig, rep: SuiteReport):
    params, grid = cfg.params, cfg.grid
    rng = make_rng(cfg.seed, 27)
    block = random_block(rng, params.n)
    _below(rep, cfg, "T_involution", "T² = id", check_T_involution(params, seed=cfg.seed).defect, "T_involution")
    _below(rep, cfg, "T_blocks", "T L T = L† on building blocks",
           check_T_blocks(block, params, seed=cfg.seed).defect, "T_involution")
    _below(rep, cfg, "block_flip", "(T⊗T)ΔL(T⊗T) = ΣΔ(L†)Σ",
           check_block_antipode_flip(block, params, seed=cfg.seed).defect, "antipode_flip")
    if params.n != 1:
        logger.info("grid and kernel antipode checks need n = 1; skipped for n = %d", params.n)
        return

    phi, psi = grid_pair()
    dag = check_T_dagger_gaussian(phi, params, grid, int(cfg.option("antipode", "vectors", 16)), cfg.seed)
    vectors = [v for k, v in dag.detail.items() if k.startswith("vector")]
    _below(rep, cfg, "T_dagger", "T L_φ T = L_{φ†} on Gaussian vectors", max(vectors), "T_dagger")
    _below(rep, cfg, "dagger_grid", "kernel of L_{φ†} matches the sampled φ†",
           dag.detail["kernel_vs_grid"], "dagger_grid")
    _below(rep, cfg, "gaussian_flip", "(T⊗T)Δφ(T⊗T) = ΣΔ(φ†)Σ on Gaussian vectors",
           check_antipode_flip(phi, params, seed=cfg.seed).defect, "antipode_flip")

    a, b = phi.sample(grid), psi.sample(grid)
    ka = antipode(a, params, closed_form=phi)
    _below(rep, cfg, "orders", "(φ*)† = (φ†)*", ka.meta["order_defect"], "antipode_orders")
    left = antipode(deformed_mul(a, b, params), params)
    right = deformed_mul(antipode(b, params, psi), ka, params)
    _below(rep, cfg, "anti_multiplicative", "κ(φ×ψ) = κψ × κφ", relative_l2(left.samples, right.samples),
           "anti_multiplicative")

    points = int(cfg.option("antipode", "points", 16))
    kernel_phi, _ = default_kernel_pair()
    _below(rep, cfg, "axiom", "m(κ⊗id)Δφ = ε(φ)1",
           check_antipode_axiom(kernel_phi, params, points, cfg.seed).defect, "antipode_axiom")
    _below(rep, cfg, "axiom_zero_counit", "m(κ⊗id)Δφ = 0 when φ(0,0,0) = 0",
           check_antipode_axiom(zero_at_origin_function(), params, points, cfg.seed).defect, "antipode_axiom")


@suite("haar")
def run_haar(cfg: RunConfig, rep: SuiteReport):
    params = cfg.params
    phi, psi = grid_pair()
    _below(rep, cfg, "trace", "h(φ*×φ) = ‖φ‖₂² and h(φ×ψ) = h(ψ×φ)",
           check_haar_trace(phi, psi, params, cfg.grid).defect, "haar_trace")
    kphi, kpsi = default_kernel_pair()
    _below(rep, cfg, "left_invariance", "(id⊗h)((ψ⊗1)Δφ) = κ((id⊗h)((1⊗φ)Δψ))",
           check_haar_left_invariance(kphi, kpsi, params, int(cfg.option("haar", "points", 16)),
                                      cfg.seed).defect, "haar_invariance")

    cross_check = bool(cfg.option("haar", "cross_check", True))
    witness = haar_witness(params.lam, params.hbar, cross_check=cross_check)
    _above(rep, cfg, "witness", "h∘κ ≠ h: |h(κφ)/h(φ) - 1| is bounded away from 0",
           abs(witness.ratio - 1.0), "haar_witness")
    if cross_check:
        grid_gap = max(abs(witness.grid_h_phi - witness.h_phi) / abs(witness.h_phi),
                       abs(witness.grid_h_kappa_phi - witness.h_kappa_phi) / abs(witness.h_kappa_phi))
        _below(rep, cfg, "witness_grid", "grid antipode reproduces h(φ) and h(κφ)", grid_gap, "haar_grid")
    if cfg.option("haar", "persist_witness", True):
        paths = persist_haar_witness(witness, cfg.out_dir)
        logger.info("haar witness written to %s", paths["descriptor"])


# ═══════════════════════════════════════════════════════════════
# R-MATRIX
# ═══════════════════════════════════════════════════════════════

@suite("rmatrix")
def run_rmatrix(cfg: RunConfig, rep: SuiteReport):
    params = cfg.params.with_hbar(1.0)
    if cfg.params.hbar != 1.0:
        logger.info("R-matrix checks run at ℏ = 1 (configured ℏ = %g)", cfg.params.hbar)
    trials = int(cfg.option("rmatrix", "trials", 100))
    vectors = int(cfg.option("rmatrix", "vectors", 4))
    block = random_block(make_rng(cfg.seed, 28), params.n, extended=True)
    almost = check_almost_cocommutative(block, params, trials, vectors, seed=cfg.seed)
    _below(rep, cfg, "almost_cocommutative", "R Δ̃L R* = Δ̃^op L (operator identity)",
           almost.detail["symbolic"], "r_symbolic")
    _below(rep, cfg, "almost_cocommutative_gaussian", "R Δ̃L R* = Δ̃^op L on Gaussian vectors",
           almost.detail["gaussian"], "r_gaussian")

    quasi = check_quasitriangular(params, seed=cfg.seed)
    _below(rep, cfg, "id_x_delta", "(id⊗Δ̃)R = R₁₃R₁₂", quasi.detail["id_x_delta"], "quasitriangular")
    _below(rep, cfg, "delta_x_id", "(Δ̃⊗id)R = R₁₃R₂₃", quasi.detail["delta_x_id"], "quasitriangular")
    _below(rep, cfg, "partial_unitarity", "RR* = R*R = id on Gaussian slices",
           check_R_partial_unitarity(params, seed=cfg.seed).defect, "r_unitarity")
    _below(rep, cfg, "multipliers", "multiplier actions of Φ and Φ' match their realizations",
           multiplier_consistency(params, trials=trials, seed=cfg.seed).defect, "r_symbolic")
    if params.n == 1:
        _below(rep, cfg, "quadrature", "Gaussian-engine Rξ matches quadrature of the reduced kernel",
               check_R_quadrature(params, seed=cfg.seed).defect, "r_gaussian")
    _below(rep, cfg, "fresnel", "∫ e^{iπt²} dt = e^{iπ/4}", check_fresnel().defect, "fresnel")
    _below(rep, cfg, "classical", "at λ = 0, Φ = id and R ≡ 1",
           check_R_classical(params, trials, cfg.seed).defect, "r_symbolic")
    _above(rep, cfg, "r21_witness", "R₂₁ ≠ R*: the quantum group is not triangular",
           r21_witness(params, seed=cfg.seed).defect, "r21_witness")
    _above(rep, cfg, "cocommutativity_witness", "Δ̃ ≠ Δ̃^op even at small λ",
           cocommutativity_witness(params, trials=trials, seed=cfg.seed).defect, "cocommutativity_witness")


@suite("qybe")
def run_qybe(cfg: RunConfig, rep: SuiteReport):
    vectors = int(cfg.option("qybe", "vectors", 20))
    _below(rep, cfg, "R", "R₁₂R₁₃R₂₃ = R₂₃R₁₃R₁₂",
           check_qybe(cfg.params.with_hbar(1.0), trials=vectors, seed=cfg.seed).defect, "qybe")


# ═══════════════════════════════════════════════════════════════
# LIMITS
# ═══════════════════════════════════════════════════════════════

def hbar_sweep_table(cfg: RunConfig) -> pd.DataFrame:
    """‖(φ×ψ - ψ×φ)/ℏ - (i/2π){φ,ψ}‖ along the configured ℏ values."""
    phi, psi = semiclassical_pair()
    pairs = [semiclassical_defect(phi, psi, h, cfg.params, cfg.grid) for h in cfg.hbar_sweep]
    return sweep_table(cfg.hbar_sweep, [p.l1 for p in pairs], [p.l2 for p in pairs])


def lambda_sweep_table(cfg: RunConfig) -> pd.DataFrame:
    """‖(Ψ_λ(F) - F)/λ - (-2πi)[ψ,F]‖ along the configured λ values."""
    F = default_two_leg_function()
    pairs = [r_classical_limit_defects(F, lam, cfg.mc_samples, cfg.seed) for lam in cfg.lambda_sweep]
    return sweep_table(cfg.lambda_sweep, [p.l1 for p in pairs], [p.l2 for p in pairs])


def sweep_tables(cfg: RunConfig) -> Tuple[pd.DataFrame, pd.DataFrame]:
    return hbar_sweep_table(cfg), lambda_sweep_table(cfg)


@suite("limits")
def run_limits(cfg: RunConfig, rep: SuiteReport):
    hbar_df, lambda_df = sweep_tables(cfg)
    hbar_ratio = max(successive_ratios(hbar_df["defect_L1"].tolist()))
    _below(rep, cfg, "hbar_sweep", "(φ×ψ - ψ×φ)/ℏ → (i/2π){φ,ψ} as ℏ → 0 (max successive ratio)",
           hbar_ratio, "hbar_ratio")
    lambda_ratio = max(successive_ratios(lambda_df["defect_L1"].tolist()))
    _below(rep, cfg, "lambda_sweep", "(Ψ_λ(F) - F)/λ → (-2πi)[ψ,F] as λ → 0 (max successive ratio)",
           lambda_ratio, "lambda_ratio")

    a, b = commuting_pair()
    _below(rep, cfg, "commuting_pair", "functions of r alone commute and have zero bracket",
           semiclassical_defect(a, b, 1.0, cfg.params, cfg.grid).l1, "hbar_zero")

    rng = make_rng(cfg.seed, 29)
    size = int(cfg.option("limits", "oracle_points", 8))
    X = np.empty((size, 8))
    X[:, [0, 1, 4, 5]] = rng.normal(0.0, 0.5, (size, 4))
    X[:, [2, 3, 6, 7]] = rng.uniform(-0.2, 0.2, (size, 4))
    tol = cfg.tol("commutator_oracle")
    try:
        defect = verify_commutator_against_oracle(default_two_leg_function(), X, tol)
    except OracleDisagreementError as exc:
        logger.error("%s", exc)
        defect = exc.defect
    _below(rep, cfg, "commutator_oracle", "local form of [ψ,F] matches quadrature of its Fourier pairs",
           defect, "commutator_oracle")

    out = Path(cfg.out_dir)
    write_sweep(hbar_df, out / "hbar_sweep.csv")
    write_sweep(lambda_df, out / "lambda_sweep.csv")


# ═══════════════════════════════════════════════════════════════
# RUNNING
# ═══════════════════════════════════════════════════════════════

def run_suite(name: str, cfg: RunConfig) -> SuiteReport:
    """Runs one suite; never raises for a failing or crashing check."""
    runner = SUITES[name]
    rep = SuiteReport(name, run_params(cfg.params, cfg.grid, cfg.seed))
    logger.info("suite %s: start", name)
    start = time.perf_counter()
    try:
        runner(cfg, rep)
    except Exception as exc:  # noqa: BLE001
        logger.exception("suite %s raised", name)
        rep.add(CheckResult.error(name, exc))
    elapsed = time.perf_counter() - start
    rep.wall_ms = int(round(elapsed * 1000)) if cfg.record_wall_time else 0
    logger.info("suite %s: %s (%d checks, %d failed, %.1fs)", name, "PASS" if rep.passed else "FAIL",
                len(rep.checks), len(rep.failures), elapsed)
    return rep


def run_suites(cfg: RunConfig) -> List[SuiteReport]:
    """Runs the configured suites in order and writes one JSON file each."""
    reports = []
    for name in cfg.suites:
        rep = run_suite(name, cfg)
        path = rep.write(cfg.out_dir)
        logger.debug("wrote %s", path)
        reports.append(rep)
    return reports
