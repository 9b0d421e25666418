"""
Kernel Suites - Comultiplication kernel, antipode axiom and Haar weight

PURPOSE:
    The checks here combine the function picture with the operator
    engine, or reduce an identity between algebra elements to explicit
    integrals over Gaussian test functions.

THEORY:
    Comultiplication. With s = e^{-λr'} and g = ψ^∨ for a Gaussian ψ,
    (Δφ)(1⊗g) = U(L_φ⊗1)U*(1⊗L_ψ) is the two-leg operator with kernel

        F(x,y,r,x',y',r') = s^{2n} ē[ℏη(r')β(sx, y' - sy)]
                            φ^∨(sx, sy, r+r') g(x' - sx, y' - sy, r')

    realized like L_φ on each leg. Changing variables in the composition
    and using η(r+r') = e^{2λr'}η(r) + η(r') gives exactly this kernel.

    Antipode axiom. m((id⊗κ)Δφ) reduces to the constant

        ∫ e^{2λr} (ℱ⁻¹φ)(e^{λr}a, e^{λr}b, c) da db dc = φ(0, 0, 0)

    The (a, b) part is a Gaussian integral; the c part is integrated over
    |c| ≤ C as ∫ bump(ρ) 2C sinc(2Cρ) dρ on a fine trapezoid lattice.

    Haar left invariance. The (id⊗h) side collapses to

        ∫dr' ∫da db ē[e^{λr'}(pa + qb)] e[ℏη(r')ab] φ^∨(-a,-b,r') ψ^∨(a,b,r+r')

    and the other side is κ of K with

        K^∨(X,Y,R) = ∫dr' e^{-2λr'} e[ℏη(r')e^{-2λr'}XY]
                     φ^∨(e^{-λr'}X, e^{-λr'}Y, R+r') ψ^∨(-e^{-λr'}X, -e^{-λr'}Y, r')

    Both are evaluated at (p, q, r) independently: Gaussian integrals in
    the fast variables, scipy quad in r'.

ARCHITECTURE ROLE:
    Called by suites/registry.py (comultiplication, antipode, haar).

DEBUGGING NOTES:
    - The kernel check needs both bumps to overlap the sampled slow box;
      with narrow bumps most sample points give 0 = 0.
    - The antipode cutoff C trades truncation error (decays faster than
      any power of C) against lattice resolution of the sinc.
"""

import json
import logging
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np
import sympy
from scipy import integrate

from functions.closed_form import GaussianClosedForm, GaussianTerm, gaussian_test_function
from functions.grid import Grid, require_n1
from functions.hopf import HaarWitness, haar
from functions.io import save_sampled
from functions.product import deformed_mul, involution
from groups.laws import eta
from groups.params import ModelParams
from operators.affine import adjoint
from operators.builders import build_function_operator, build_kernel_realization, build_U, gaussian_log, hilbert_signature
from operators.checks import Defect, merge_defects, vector_defect, gaussian_points
from operators.expr import beta_expr, eta_expr, scale, vsub
from operators.gaussian import QuadraticFourierOp, apply_chain, aux_symbols, gaussian_integral, standard_gaussian
from utils.errors import DimensionError
from utils.numerics import TWO_PI, make_rng, relative_defect

logger = logging.getLogger(__name__)

SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])
ANTIPODE_CUTOFF = 200.0
ANTIPODE_LATTICE = 16001
QUAD = dict(epsabs=1e-13, epsrel=1e-11, limit=200)


def default_kernel_pair(bump_radius: float = 0.8) -> Tuple[GaussianClosedForm, GaussianClosedForm]:
    """φ, ψ with r-bumps wide enough to cover r + r' on the sampled box."""
    phi = gaussian_test_function(width=1.0, center=(0.2, -0.1), wave=(0.1, 0.0), bump_radius=bump_radius, name="phi")
    psi = gaussian_test_function(width=1.2, center=(-0.1, 0.2), wave=(0.0, -0.15), bump_radius=bump_radius,
                                 name="psi")
    return phi, psi


def _support(f: GaussianClosedForm) -> Tuple[float, float]:
    if not f.bumps:
        raise DimensionError(f"{f.name or 'function'} has no r-bump")
    b = f.bumps[0]
    return b.center - b.radius, b.center + b.radius


def _slow(f: GaussianClosedForm, r: float) -> float:
    return float(f.slow_factor(np.array([[r]]))[0])


def _complex_quad(func, lo: float, hi: float) -> complex:
    if hi <= lo:
        return 0j
    re = integrate.quad(lambda t: func(t).real, lo, hi, **QUAD)[0]
    im = integrate.quad(lambda t: func(t).imag, lo, hi, **QUAD)[0]
    return complex(re, im)


# ═══════════════════════════════════════════════════════════════
# GAUSSIAN FORMS
# ═══════════════════════════════════════════════════════════════

def term_form(term: GaussianTerm, M: np.ndarray, t: Optional[np.ndarray] = None):
    """(H, B, C) with term(Mv + t) = exp(-vᵀHv + B·v + C)."""
    if not term.constant_poly:
        raise DimensionError("term_form needs a constant polynomial factor")
    M = np.atleast_2d(np.asarray(M, dtype=float))
    t = np.zeros(term.mu.size) if t is None else np.asarray(t, dtype=float)
    d = t - term.mu
    H = np.pi * M.T @ term.A @ M
    B = -TWO_PI * M.T @ term.A @ d + 1j * TWO_PI * M.T @ term.k
    C = np.log(complex(term.coef * sum(term.poly.values()))) - np.pi * d @ term.A @ d + 1j * TWO_PI * term.k @ t
    return H, B, complex(C)


def _pair_integral(f1: GaussianClosedForm, M1, f2: GaussianClosedForm, M2,
                   H_extra: np.ndarray, B_extra: np.ndarray) -> complex:
    """∫ f1(M1 v) f2(M2 v) exp(-vᵀH_extra v + B_extra·v) dv over the fast parts (sums of terms)."""
    total = 0j
    for t1 in f1.terms:
        H1, B1, C1 = term_form(t1, M1)
        for t2 in f2.terms:
            H2, B2, C2 = term_form(t2, M2)
            total += np.exp(gaussian_integral(H1 + H2 + H_extra, B1 + B2 + B_extra, C1 + C2))
    return complex(total)


# ═══════════════════════════════════════════════════════════════
# COMULTIPLICATION KERNEL
# ═══════════════════════════════════════════════════════════════

def comultiplication_log_kernel(phi: GaussianClosedForm, psi: GaussianClosedForm, params: ModelParams,
                                aux, r2: sympy.Symbol) -> sympy.Expr:
    """log F without the slow bumps, in aux = (x, y, x', y') and the second-leg r'."""
    n = params.n
    x, y, x2, y2 = aux[:n], aux[n:2 * n], aux[2 * n:3 * n], aux[3 * n:]
    s = sympy.exp(-sympy.Float(params.lam) * r2)
    sx, sy = scale(s, x), scale(s, y)
    phi_vee = phi.terms[0].transformed(+1)
    g = psi.terms[0].transformed(+1)
    eta_r2 = params.hbar * eta_expr(params.lam, r2)
    return (-2 * n * sympy.Float(params.lam) * r2
            - 2 * sympy.pi * sympy.I * eta_r2 * beta_expr(sx, vsub(y2, sy))
            + gaussian_log(phi_vee, sx + sy)
            + gaussian_log(g, vsub(x2, sx) + vsub(y2, sy)))


def build_comultiplication_kernel(phi: GaussianClosedForm, psi: GaussianClosedForm,
                                  params: ModelParams) -> QuadraticFourierOp:
    """The two-leg operator with kernel F."""
    if len(phi.terms) != 1 or len(psi.terms) != 1:
        raise DimensionError("comultiplication kernel needs single-term Gaussians")
    sig = hilbert_signature(params, 2)
    aux = aux_symbols("abcd", params.n)
    log_F = comultiplication_log_kernel(phi, psi, params, aux, sig.leg(1).r)

    def weight(s):
        s = np.asarray(s, dtype=float)
        return complex(_slow(phi, s[0] + s[1]) * _slow(psi, s[1]))

    return build_kernel_realization(sig, params, log_F, aux, weight, "F")


def comultiplication_kernel_values(phi: GaussianClosedForm, psi: GaussianClosedForm, params: ModelParams,
                                   points: np.ndarray) -> np.ndarray:
    """F at points (N, 6) of (x, y, r, x', y', r'), n = 1."""
    require_n1(params.n)
    aux = aux_symbols("abcd", 1)
    r2 = sympy.Symbol("kr2", real=True)
    f = sympy.lambdify(list(aux) + [r2], sympy.exp(comultiplication_log_kernel(phi, psi, params, aux, r2)),
                       modules="numpy")
    P = np.atleast_2d(np.asarray(points, dtype=float))
    fast = np.asarray(f(P[:, 0], P[:, 1], P[:, 3], P[:, 4], P[:, 5]), dtype=complex)
    slow = phi.slow_factor(P[:, 2:3] + P[:, 5:6]) * psi.slow_factor(P[:, 5:6])
    return fast * slow


def check_comultiplication_kernel(phi: GaussianClosedForm, psi: GaussianClosedForm, params: ModelParams,
                                  vectors: int = 4, points: int = 8, seed: int = 0) -> Defect:
    """F against U(L_φ⊗1)U*(1⊗L_ψ) on Gaussian vectors."""
    sig = hilbert_signature(params, 2)
    U = build_U(params)
    chain = [U, build_function_operator(phi, params).embedded((0,), 2), adjoint(U),
             build_function_operator(psi, params).embedded((1,), 2)]
    F = build_comultiplication_kernel(phi, psi, params)
    rng = make_rng(seed, 11)
    parts = {}
    for k in range(vectors):
        v = standard_gaussian(sig, rng, name=f"xi{k}")
        X = gaussian_points(sig, rng, points)
        parts[f"vector{k}"] = vector_defect(apply_chain([F], v), apply_chain(chain, v), X).defect
    out = merge_defects(parts)
    logger.debug("comultiplication kernel defect %.3e", out.defect)
    return out


def check_kernel_support(phi: GaussianClosedForm, params: ModelParams, center: float = 0.2,
                         radius: float = 0.05, points: int = 64, seed: int = 0) -> Defect:
    """With g supported in |r' - center| < radius, F vanishes for every r' outside."""
    psi = gaussian_test_function(width=1.0, bump_center=center, bump_radius=radius, name="narrow")
    rng = make_rng(seed, 12)
    P = np.column_stack([rng.uniform(-1, 1, (points, 2)), rng.uniform(-0.3, 0.3, points),
                         rng.uniform(-1, 1, (points, 2)), np.zeros(points)])
    inside = P.copy()
    inside[:, 5] = center + rng.uniform(-0.5, 0.5, points) * radius
    outside = P.copy()
    outside[:, 5] = center + np.sign(rng.uniform(-1, 1, points)) * radius * rng.uniform(1.0, 10.0, points)
    v_in = comultiplication_kernel_values(phi, psi, params, inside)
    v_out = comultiplication_kernel_values(phi, psi, params, outside)
    peak = float(np.max(np.abs(v_in)))
    leak = float(np.max(np.abs(v_out)))
    return Defect(leak if peak > 0 else float("inf"), {"inside_peak": peak, "outside_max": leak})


def check_kernel_classical_reduction(phi: GaussianClosedForm, psi: GaussianClosedForm, params: ModelParams,
                                     points: int = 32, seed: int = 0) -> Defect:
    """At λ = 0, F = ē[ℏr'β(x, y'-y)] φ^∨(x, y, r+r') g(x'-x, y'-y, r')."""
    p0 = params.with_lambda(0.0)
    rng = make_rng(seed, 13)
    P = np.column_stack([rng.uniform(-1, 1, (points, 2)), rng.uniform(-0.3, 0.3, points),
                         rng.uniform(-1, 1, (points, 2)), rng.uniform(-0.3, 0.3, points)])
    x, y, r, x2, y2, r2 = P.T
    phi_vee, g = phi.vee(), psi.vee()
    expected = (np.exp(-1j * TWO_PI * params.hbar * r2 * x * (y2 - y))
                * phi_vee(np.column_stack([x, y, r + r2]))
                * g(np.column_stack([x2 - x, y2 - y, r2])))
    return Defect(relative_defect(comultiplication_kernel_values(phi, psi, p0, P), expected))


# ═══════════════════════════════════════════════════════════════
# ANTIPODE AXIOM
# ═══════════════════════════════════════════════════════════════

def antipode_axiom_value(phi: GaussianClosedForm, params: ModelParams, point,
                         cutoff: float = ANTIPODE_CUTOFF, lattice: int = ANTIPODE_LATTICE) -> complex:
    """∫ e^{2λr}(ℱ⁻¹φ)(e^{λr}a, e^{λr}b, c) da db dc at one (p, q, r)."""
    require_n1(params.n)
    r = float(point[2])
    grow = np.exp(params.lam * r)
    fast = 0j
    for term in phi.terms:
        H, B, C = term_form(term.transformed(+1), grow * np.eye(2))
        fast += np.exp(gaussian_integral(H, B, C + 2 * params.lam * r))
    lo, hi = _support(phi)
    rho = np.linspace(lo, hi, lattice)
    slow = integrate.trapezoid(phi.slow_factor(rho[:, None]) * 2 * cutoff * np.sinc(2 * cutoff * rho), rho)
    return complex(fast * slow)


def check_antipode_axiom(phi: GaussianClosedForm, params: ModelParams, points: int = 16, seed: int = 0) -> Defect:
    """
    The reduced integral equals ε(φ) = φ(0,0,0) at every sample point and
    does not move when λ is halved.
    """
    rng = make_rng(seed, 14)
    P = np.column_stack([rng.uniform(-1, 1, (points, 2)), rng.uniform(-0.3, 0.3, points)])
    values = np.array([antipode_axiom_value(phi, params, x) for x in P])
    counit = complex(phi(np.zeros((1, 3)))[0])
    half = params.with_lambda(params.lam / 2)
    halved = np.array([antipode_axiom_value(phi, half, x) for x in P[:4]])
    scale_ = abs(counit) or 1.0
    parts = {
        "counit": float(np.max(np.abs(values - counit))) / scale_,
        "spread": float(np.max(np.abs(values - values[0]))) / scale_,
        "lambda_shift": float(np.max(np.abs(halved - values[:4]))) / scale_,
    }
    out = merge_defects(parts)
    out.detail["value"] = [float(values[0].real), float(values[0].imag)]
    logger.debug("antipode axiom: ε(φ)=%s, defect %.3e", counit, out.defect)
    return out


# ═══════════════════════════════════════════════════════════════
# HAAR WEIGHT
# ═══════════════════════════════════════════════════════════════

def check_haar_trace(phi: GaussianClosedForm, psi: GaussianClosedForm, params: ModelParams, grid: Grid) -> Defect:
    """h(φ*×φ) = ‖φ‖₂² and h(φ×ψ) = h(ψ×φ) on the grid."""
    a, b = phi.sample(grid), psi.sample(grid)
    norm2 = a.l2_norm() ** 2
    value = haar(deformed_mul(involution(a, params), a, params))
    ab = haar(deformed_mul(a, b, params))
    ba = haar(deformed_mul(b, a, params))
    return merge_defects({"norm": abs(value - norm2) / norm2, "trace": abs(ab - ba) / abs(ab)})


def haar_invariance_middle(phi: GaussianClosedForm, psi: GaussianClosedForm, params: ModelParams,
                           point) -> complex:
    """The (id⊗h) side at (p, q, r) through its collapsed (a, b, r') integral."""
    require_n1(params.n)
    p, q, r = (float(v) for v in point)
    fv, gv = phi.vee(), psi.vee()
    lo_f, hi_f = _support(phi)
    lo_g, hi_g = _support(psi)
    lo, hi = max(lo_f, lo_g - r), min(hi_f, hi_g - r)

    def integrand(rp):
        c = params.hbar * float(eta(params.lam, rp))
        B = -1j * TWO_PI * np.exp(params.lam * rp) * np.array([p, q])
        fast = _pair_integral(fv, -np.eye(2), gv, np.eye(2), -1j * np.pi * c * SWAP, B)
        return fast * _slow(phi, rp) * _slow(psi, r + rp)

    return _complex_quad(integrand, lo, hi)


def haar_invariance_kappa_side(phi: GaussianClosedForm, psi: GaussianClosedForm, params: ModelParams,
                               point) -> complex:
    """κ(K) at (p, q, r), from K^∨ at (-x, -y, -r)."""
    require_n1(params.n)
    p, q, r = (float(v) for v in point)
    lam = params.lam
    fv, gv = phi.vee(), psi.vee()
    lo_f, hi_f = _support(phi)
    lo_g, hi_g = _support(psi)
    lo, hi = max(lo_f + r, lo_g), min(hi_f + r, hi_g)
    B = -1j * TWO_PI * np.exp(-lam * r) * np.array([p, q])
    eta_minus_r = float(eta(lam, -r))

    def integrand(rp):
        s = np.exp(-lam * rp)
        c = params.hbar * (eta_minus_r + float(eta(lam, rp)) * s * s)
        fast = _pair_integral(fv, -s * np.eye(2), gv, s * np.eye(2), -1j * np.pi * c * SWAP, B)
        return s * s * fast * _slow(phi, rp - r) * _slow(psi, rp)

    return _complex_quad(integrand, lo, hi)


def check_haar_left_invariance(phi: GaussianClosedForm, psi: GaussianClosedForm, params: ModelParams,
                               points: int = 16, seed: int = 0) -> Defect:
    rng = make_rng(seed, 15)
    P = np.column_stack([rng.uniform(-1, 1, (points, 2)), rng.uniform(-0.3, 0.3, points)])
    lhs = np.array([haar_invariance_middle(phi, psi, params, x) for x in P])
    rhs = np.array([haar_invariance_kappa_side(phi, psi, params, x) for x in P])
    out = Defect(relative_defect(lhs, rhs), {"peak": float(np.max(np.abs(rhs)))})
    logger.debug("haar left invariance defect %.3e over %d points", out.defect, points)
    return out


def persist_haar_witness(witness: HaarWitness, out_dir) -> Dict[str, str]:
    """Writes the witness samples and a JSON descriptor next to the reports."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"descriptor": str(out / "haar_witness.json")}
    doc = {
        "function": witness.function.to_dict(),
        "lambda": witness.lam,
        "h_phi": [witness.h_phi.real, witness.h_phi.imag],
        "h_kappa_phi": [witness.h_kappa_phi.real, witness.h_kappa_phi.imag],
        "ratio": witness.ratio,
    }
    if witness.sampled is not None:
        paths["samples"] = str(save_sampled(witness.sampled, out / "haar_witness.hqgs"))
        doc["samples"] = "haar_witness.hqgs"
    Path(paths["descriptor"]).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info("haar witness written to %s", out)
    return paths
