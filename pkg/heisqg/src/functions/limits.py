"""
Limits - Semiclassical and classical-limit defects

PURPOSE:
    Two limit statements are measured numerically:

    1. ℏ → 0 (strict deformation quantization):

           (φ ×_ℏ ψ - ψ ×_ℏ φ)/ℏ  →  (i/2π) {φ, ψ}

       with {φ, ψ} = η_λ(r)(∂_pφ ∂_qψ - ∂_pψ ∂_qφ). The defect is reported
       in grid L¹ and L² norms, which stand in for the operator norm.

    2. λ → 0 (classical limit of the R-matrix): on the two-leg extended
       picture X = (p, q, r, w, p', q', r', w'),

           Ψ_λ(F) = R_λ F R_λ*  →  F + λ(-2πi)[ψ, F] + o(λ)

THEORY:
    Ψ_λ is a point transformation with two phases:

        Ψ_λ(F)(X) = ē[2λ e^{-λr} p q'] e[2λ e^{w-w'-λr} p q'] ·
                    F(e^{λr'}p, e^{-λr'}q + 2λ e^{-λr-λr'} η_λ(r) q', r, w,
                      e^{λr}p' - 2λ e^{w-w'} η_λ(r') p, e^{-λr}q', r', w')

    The substitution is triangular with unit Jacobian, so Ψ_λ preserves
    the L¹ norm.

    The oscillatory Fourier pairs in the defining formula of [ψ, ·] reduce
    to derivatives at the origin:

        ∫∫ e[s̃ t] s̃ G(t) ds̃ dt = (1/2πi) ∫ G(t) δ'(t) dt = -(1/2πi) G'(0)

    which gives the local form

        (-2πi)[ψ, F] = -4πi (1 - e^{w-w'}) p q' F
                       + r'(p ∂_p - q ∂_q) F + r(p' ∂_p' - q' ∂_q') F
                       + 2r q' ∂_q F - 2r' e^{w-w'} p ∂_p' F

    The oracle never uses the local form. It starts again from the weight
    and the argument map of the defining integral. Each frequency variable
    is damped by exp(-πε²ν²) and integrated with quad_vec; its position
    partner goes through the trapezoid rule. A disagreement above
    tolerance is a hard failure.

ARCHITECTURE ROLE:
    Called by the limits suite and the sweep command.

DEBUGGING NOTES:
    - The λ-sweep uses common random numbers: every λ sees the same
      Monte-Carlo points, so the successive ratios are not swamped by
      sampling noise.
    - Raising mc_samples by 2x should move the L¹ estimate by a few
      percent at most; larger swings mean the proposal misses the support.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, NamedTuple, Sequence, Tuple

import numpy as np
from scipy import integrate

from functions.closed_form import (
    ClosedFormFunction,
    GaussianClosedForm,
    SlowProfile,
    TransformedClosedForm,
    gaussian_test_function,
    two_leg_test_function,
)
from functions.grid import Grid
from functions.product import deformed_mul
from groups.laws import eta
from groups.params import ModelParams
from utils.errors import ConfigurationError, DimensionError, OracleDisagreementError
from utils.numerics import TWO_PI, e, ebar

logger = logging.getLogger(__name__)

MC_SAMPLES = 1_000_000
MC_BATCH = 1 << 16
ORACLE_EPS = 1e-2
ORACLE_TOL = 1e-3

# two-leg coordinate slots
P, Q, R, W, P2, Q2, R2, W2 = range(8)


class DefectPair(NamedTuple):
    l1: float
    l2: float


# ═══════════════════════════════════════════════════════════════
# ℏ → 0
# ═══════════════════════════════════════════════════════════════

def semiclassical_pair(bump_radius: float = 0.3) -> Tuple[GaussianClosedForm, GaussianClosedForm]:
    """Two broad Gaussians (A = 0.5 I and 0.7 I), the second shifted."""
    phi = gaussian_test_function(A=0.5 * np.eye(2), center=(0.0, 0.0), bump_radius=bump_radius, name="phi")
    psi = gaussian_test_function(A=0.7 * np.eye(2), center=(0.3, -0.2), bump_radius=bump_radius, name="psi")
    return phi, psi


def commuting_pair(bump_radius: float = 0.3) -> Tuple[SlowProfile, SlowProfile]:
    """Two functions of r alone."""
    return SlowProfile(1.0, 0.0, bump_radius), SlowProfile(0.5j, 0.05, bump_radius)


def poisson_bracket_grid(phi: ClosedFormFunction, psi: ClosedFormFunction, grid: Grid, lam: float) -> np.ndarray:
    """{φ, ψ} sampled on the grid from exact gradients."""
    A, B, Rm = grid.mesh()
    X = np.stack([A, B, Rm], axis=-1)
    gphi = phi.gradient(X)
    gpsi = psi.gradient(X)
    return np.asarray(eta(lam, Rm)) * (gphi[..., 0] * gpsi[..., 1] - gpsi[..., 0] * gphi[..., 1])


def semiclassical_defect(phi: ClosedFormFunction, psi: ClosedFormFunction, hbar: float, params: ModelParams,
                         grid: Grid, engine: str = "fft") -> DefectPair:
    """
    ‖(φ ×_ℏ ψ - ψ ×_ℏ φ)/ℏ - (i/2π){φ, ψ}‖ in grid L¹ and L² norms.

    λ is taken from params; ℏ from the argument. λ = 0 is allowed here (the
    bracket is then the linear one r(β(x,y') - β(x',y))).
    """
    if hbar == 0:
        raise ConfigurationError("semiclassical defect needs ℏ ≠ 0")
    p = params.with_hbar(hbar)
    a, b = phi.sample(grid), psi.sample(grid)
    comm = (deformed_mul(a, b, p, engine).samples - deformed_mul(b, a, p, engine).samples) / hbar
    bracket = poisson_bracket_grid(phi, psi, grid, params.lam)
    diff = comm - (1j / TWO_PI) * bracket
    l1 = float(np.sum(np.abs(diff)) * grid.cell_volume)
    l2 = float(np.sqrt(np.sum(np.abs(diff) ** 2) * grid.cell_volume))
    logger.debug("semiclassical defect ℏ=%g: L1=%.3e L2=%.3e", hbar, l1, l2)
    return DefectPair(l1, l2)


# ═══════════════════════════════════════════════════════════════
# Ψ_λ
# ═══════════════════════════════════════════════════════════════

def _require_two_leg(F: ClosedFormFunction):
    if F.picture != "pqrw2":
        raise DimensionError(f"expected a two-leg (p,q,r,w)² function, got {F.picture}")


def psi_substitution(X: np.ndarray, lam: float) -> np.ndarray:
    """The coordinate map inside Ψ_λ."""
    X = np.asarray(X, dtype=float)
    p, q, r, w = X[..., P], X[..., Q], X[..., R], X[..., W]
    p2, q2, r2, w2 = X[..., P2], X[..., Q2], X[..., R2], X[..., W2]
    out = X.copy()
    out[..., P] = np.exp(lam * r2) * p
    out[..., Q] = np.exp(-lam * r2) * q + 2 * lam * np.exp(-lam * r - lam * r2) * eta(lam, r) * q2
    out[..., P2] = np.exp(lam * r) * p2 - 2 * lam * np.exp(w - w2) * eta(lam, r2) * p
    out[..., Q2] = np.exp(-lam * r) * q2
    return out


def psi_prefactor(X: np.ndarray, lam: float) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    p, r, w, q2, w2 = X[..., P], X[..., R], X[..., W], X[..., Q2], X[..., W2]
    return (ebar(2 * lam * np.exp(-lam * r) * p * q2)
            * e(2 * lam * np.exp(w - w2 - lam * r) * p * q2))


def rmatrix_conjugation_Psi(F: ClosedFormFunction, lam: float) -> TransformedClosedForm:
    """Ψ_λ(F) = R_λ F R_λ* as an evaluable closed form."""
    _require_two_leg(F)
    return TransformedClosedForm(F, lambda X: psi_substitution(X, lam), lambda X: psi_prefactor(X, lam),
                                 name=f"Psi_{lam:g}")


# ═══════════════════════════════════════════════════════════════
# [ψ, F]
# ═══════════════════════════════════════════════════════════════

def generator_terms(X: np.ndarray) -> Tuple[np.ndarray, List[Tuple[int, np.ndarray]]]:
    """
    Multiplication part and (axis, coefficient) derivative terms of
    (-2πi)[ψ, ·] at X.
    """
    X = np.asarray(X, dtype=float)
    p, q, r, w = X[..., P], X[..., Q], X[..., R], X[..., W]
    p2, q2, r2, w2 = X[..., P2], X[..., Q2], X[..., R2], X[..., W2]
    ew = np.exp(w - w2)
    mult = -2j * TWO_PI * (1.0 - ew) * p * q2
    terms = [
        (P, r2 * p),
        (Q, -r2 * q),
        (P2, r * p2),
        (Q2, -r * q2),
        (Q, 2 * r * q2),
        (P2, -2 * r2 * ew * p),
    ]
    return mult, terms


class RClassicalCommutator(ClosedFormFunction):
    """[ψ, F] in local form; derivative() gives (-2πi)[ψ, F]."""

    def __init__(self, F: ClosedFormFunction):
        _require_two_leg(F)
        self.F = F
        self.picture = F.picture

    def derivative(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        mult, terms = generator_terms(X)
        grad = self.F.gradient(X)
        out = mult * self.F(X)
        for axis, coef in terms:
            out = out + coef * grad[..., axis]
        return out

    def __call__(self, X: np.ndarray) -> np.ndarray:
        return self.derivative(X) / (-1j * TWO_PI)


def r_classical_commutator(F: ClosedFormFunction) -> RClassicalCommutator:
    return RClassicalCommutator(F)


def _psi_weight(X: np.ndarray, st: float, stt: float, xt: float, yt: float) -> float:
    """Polynomial weight of [ψ, F]; affine in each frequency variable."""
    p, r, w = X[P], X[R], X[W]
    q2, r2, w2 = X[Q2], X[R2], X[W2]
    ew = np.exp(w - w2)
    return float((r * stt + r2 * st)
                 + 2 * (p * q2 + r * q2 * yt - ew * p * q2 - r2 * ew * p * xt))


def _psi_argument(X: np.ndarray, wt=0.0, wtt=0.0, pt=0.0, qt=0.0) -> np.ndarray:
    """Argument of F inside [ψ, F]; the position variables may be arrays."""
    wt, wtt, pt, qt = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (wt, wtt, pt, qt)))
    out = np.broadcast_to(X, wt.shape + (X.size,)).copy()
    out[..., P] = np.exp(wt) * X[P]
    out[..., Q] = np.exp(-wt) * X[Q] + qt
    out[..., P2] = np.exp(wtt) * X[P2] + pt
    out[..., Q2] = np.exp(-wtt) * X[Q2]
    return out


@lru_cache(maxsize=8)
def _pair_kernels(eps: float, points: int = 401) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Inner frequency integrals ∫ ν^k exp(-πε²ν²) e[νu] dν, k = 0, 1, on a
    u-grid wide enough that both have decayed below double precision.
    """
    u = np.linspace(-5.0 * eps, 5.0 * eps, points)

    def integrand(nu):
        damp = np.exp(-np.pi * (eps * nu) ** 2)
        phase = TWO_PI * nu * u
        return np.concatenate([damp * np.cos(phase), damp * np.sin(phase),
                               nu * damp * np.cos(phase), nu * damp * np.sin(phase)])

    lim = 4.0 / eps
    vals, err = integrate.quad_vec(integrand, -lim, lim, epsabs=1e-12, epsrel=1e-11)
    logger.debug("pair kernels at eps=%g: quad_vec error %.2e", eps, err)
    c0, s0, c1, s1 = np.split(vals, 4)
    return u, c0 + 1j * s0, c1 + 1j * s1


def commutator_oracle(F: ClosedFormFunction, X: np.ndarray, eps: float = ORACLE_EPS) -> complex:
    """
    (-2πi)[ψ, F](X) from the defining integral, one Fourier pair at a time.

    Every frequency variable is damped by exp(-πε²ν²) and integrated by
    quad_vec; its position partner is integrated by the trapezoid rule.
    The weight is affine, so each monomial touches one pair and the
    pairs it does not touch collapse to evaluation at zero.
    """
    X = np.asarray(X, dtype=float)
    u, kernel0, kernel1 = _pair_kernels(float(eps))

    c0 = _psi_weight(X, 0.0, 0.0, 0.0, 0.0)
    coeffs = {
        "wt": _psi_weight(X, 1.0, 0.0, 0.0, 0.0) - c0,
        "wtt": _psi_weight(X, 0.0, 1.0, 0.0, 0.0) - c0,
        "pt": _psi_weight(X, 0.0, 0.0, 1.0, 0.0) - c0,
        "qt": _psi_weight(X, 0.0, 0.0, 0.0, 1.0) - c0,
    }

    total = c0 * integrate.trapezoid(kernel0 * F(_psi_argument(X, wt=u)), u)
    for position, coef in coeffs.items():
        if coef == 0.0:
            continue
        total += coef * integrate.trapezoid(kernel1 * F(_psi_argument(X, **{position: u})), u)
    return complex(-1j * TWO_PI * total)


def verify_commutator_against_oracle(F: ClosedFormFunction, points: np.ndarray, tol: float = ORACLE_TOL,
                                     eps: float = ORACLE_EPS) -> float:
    """
    Relative disagreement between the local form and the quadrature oracle.

    Raises:
        OracleDisagreementError: above tol
    """
    comm = RClassicalCommutator(F)
    points = np.atleast_2d(points)
    local = comm.derivative(points)
    oracle = np.array([commutator_oracle(F, x, eps) for x in points])
    scale = float(np.max(np.abs(oracle))) or 1.0
    defect = float(np.max(np.abs(local - oracle))) / scale
    logger.debug("[ψ,F] oracle defect %.3e over %d points", defect, len(points))
    if defect > tol:
        raise OracleDisagreementError("local form of [ψ,F] disagrees with quadrature", defect, tol)
    return defect


# ═══════════════════════════════════════════════════════════════
# MONTE-CARLO L¹
# ═══════════════════════════════════════════════════════════════

FAST_SLOTS = (P, Q, P2, Q2)
SLOW_SLOTS = (R, W, R2, W2)


@dataclass
class ImportanceProposal:
    """Gaussian in the fast slots, uniform on [-ρ, ρ] in the slow slots."""
    center: np.ndarray
    sigma: float = 1.0
    rho: float = 0.3

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        X = np.empty((size, 8))
        X[:, list(FAST_SLOTS)] = self.center + self.sigma * rng.standard_normal((size, 4))
        X[:, list(SLOW_SLOTS)] = rng.uniform(-self.rho, self.rho, (size, 4))
        return X

    def pdf(self, X: np.ndarray) -> np.ndarray:
        z = (X[:, list(FAST_SLOTS)] - self.center) / self.sigma
        fast = np.exp(-0.5 * np.sum(z * z, axis=1)) / (2 * np.pi * self.sigma ** 2) ** 2
        return fast / (2 * self.rho) ** 4

    @classmethod
    def for_function(cls, F: ClosedFormFunction, sigma: float = 1.0) -> "ImportanceProposal":
        center = np.zeros(4)
        rho = 0.3
        if isinstance(F, GaussianClosedForm) and F.terms:
            center = np.asarray(F.terms[0].mu, dtype=float)
            rho = max(b.radius for b in F.bumps) if F.bumps else rho
        return cls(center, sigma, rho)


def mc_norms(func: Callable[[np.ndarray], np.ndarray], proposal: ImportanceProposal,
             samples: int = MC_SAMPLES, seed: int = 0) -> DefectPair:
    """(∫|func| dX, (∫|func|² dX)^{1/2}) by importance sampling with a fixed seed."""
    rng = np.random.default_rng(seed)
    total, total_sq = 0.0, 0.0
    done = 0
    while done < samples:
        size = min(MC_BATCH, samples - done)
        X = proposal.draw(rng, size)
        mag = np.abs(func(X))
        pdf = proposal.pdf(X)
        total += float(np.sum(mag / pdf))
        total_sq += float(np.sum(mag * mag / pdf))
        done += size
    return DefectPair(total / samples, float(np.sqrt(total_sq / samples)))


def mc_l1(func: Callable[[np.ndarray], np.ndarray], proposal: ImportanceProposal,
          samples: int = MC_SAMPLES, seed: int = 0) -> float:
    return mc_norms(func, proposal, samples, seed).l1


def r_classical_limit_defects(F: ClosedFormFunction, lam: float, samples: int = MC_SAMPLES,
                              seed: int = 0, proposal: ImportanceProposal = None) -> DefectPair:
    """‖(Ψ_λ(F) - F)/λ - (-2πi)[ψ, F]‖ in L¹ and L² by Monte-Carlo."""
    _require_two_leg(F)
    if lam == 0:
        raise ConfigurationError("classical-limit defect needs λ ≠ 0")
    proposal = proposal or ImportanceProposal.for_function(F)
    psi_F = rmatrix_conjugation_Psi(F, lam)
    comm = RClassicalCommutator(F)

    def integrand(X):
        return (psi_F(X) - F(X)) / lam - comm.derivative(X)

    value = mc_norms(integrand, proposal, samples, seed)
    logger.debug("classical-limit defect λ=%g: L1=%.4e L2=%.4e (%d samples)", lam, value.l1, value.l2, samples)
    return value


def r_classical_limit_defect(F: ClosedFormFunction, lam: float, samples: int = MC_SAMPLES,
                             seed: int = 0, proposal: ImportanceProposal = None) -> float:
    return r_classical_limit_defects(F, lam, samples, seed, proposal).l1


def psi_l1_norms(F: ClosedFormFunction, lam: float, samples: int = MC_SAMPLES,
                 seed: int = 0) -> Tuple[float, float]:
    """(‖Ψ_λ(F)‖_{L¹}, ‖F‖_{L¹}) on common Monte-Carlo points."""
    proposal = ImportanceProposal.for_function(F)
    return (mc_l1(rmatrix_conjugation_Psi(F, lam), proposal, samples, seed),
            mc_l1(F, proposal, samples, seed))


def classical_limit_sweep(F: ClosedFormFunction, lams: Sequence[float], samples: int = MC_SAMPLES,
                          seed: int = 0) -> List[float]:
    return [r_classical_limit_defect(F, lam, samples, seed) for lam in lams]


def default_two_leg_function() -> GaussianClosedForm:
    return two_leg_test_function()
