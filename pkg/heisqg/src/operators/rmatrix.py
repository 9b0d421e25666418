"""
R-matrix - R = ΦΦ′ on the extended two-leg Hilbert space

PURPOSE:
    Holds the three pictures of R: the function on G̃×G̃, the multiplier
    actions (builders.build_*_mult_actions) and the Hilbert-space operator
    applied to Gaussian slices. Also provides the reduced-kernel quadrature
    oracle for Φ′.

THEORY:
    With κ = 2λe^{-λr'}:

        Φ′ξ(X) = ∫ ē[κ p̃·q̃] e(p̃·x̃ + q̃·ỹ) ē[η_λ(r)β(x̃, y)]
                     ξ(x - x̃, y, r, w, x', y' - ỹ, r', w') dp̃ dq̃ dx̃ dỹ

    Integrating p̃, q̃ first leaves the reduced kernel
    |κ|^{-n} e(x̃·ỹ/κ) ē[η_λ(r)β(x̃, y)] in (x̃, ỹ), which is what the
    quadrature oracle integrates. R* = Φ′*Φ* with the conjugate kernel
    and shifts +x̃, +ỹ.

    λ = 0 gives κ = 0: the p̃ and q̃ integrals collapse to delta functions
    and R is the identity.

    The function ē[λ(rs'+r's)] ē[κ p·q'] is the right action of Φ on the
    function Φ′; the operator ΦΦ′ itself realizes ē[λ(rs'+r's)] ē[2λe^{-λr} p·q']
    by the left-action formula.

ARCHITECTURE ROLE:
    Used by checks.check_qybe, check_quasitriangular,
    check_almost_cocommutative and the rmatrix suite.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import sympy

from groups.laws import eta
from groups.params import ModelParams
from operators.affine import AffinePhaseOp, adjoint, embed_legs
from operators.builders import build_Phi, hilbert_signature
from operators.expr import beta_expr, eta_expr, vadd, vsub
from operators.gaussian import (
    GaussianSliceVector,
    QuadraticFourierOp,
    apply_affine,
    apply_quadratic_fourier,
    aux_symbols,
)
from utils.numerics import e, ebar

logger = logging.getLogger(__name__)


def _phi_prime(params: ModelParams, sign: int) -> QuadraticFourierOp:
    """Φ′ (sign=+1) or Φ′* (sign=-1)."""
    sig = hilbert_signature(params, 2, True)
    L1, L2 = sig.leg(0), sig.leg(1)
    n, lam = params.n, params.lam
    aux = aux_symbols("pqxy", n)
    pt, qt, xt, yt = aux[:n], aux[n:2 * n], aux[2 * n:3 * n], aux[3 * n:]
    kappa = 2 * lam * sympy.exp(-sympy.Float(lam) * L2.r)
    phase = (kappa * beta_expr(pt, qt) - beta_expr(pt, xt) - beta_expr(qt, yt)
             + eta_expr(lam, L1.r) * beta_expr(xt, L1.y))
    shift = vsub if sign > 0 else vadd
    sub = {s: s for s in sig.symbols}
    sub.update(zip(L1.x, shift(L1.x, xt)))
    sub.update(zip(L2.y, shift(L2.y, yt)))
    name = "Phi'" if sign > 0 else "Phi'*"
    return QuadraticFourierOp(sig, aux, tuple(sub[s] for s in sig.symbols), sign * phase, 1, None, name)


def build_PhiPrime(params: ModelParams) -> QuadraticFourierOp:
    return _phi_prime(params, +1)


def build_PhiPrime_adjoint(params: ModelParams) -> QuadraticFourierOp:
    return _phi_prime(params, -1)


@dataclass
class RMatrixOperator:
    """R = Φ∘Φ′ and R* = Φ′*∘Φ*, possibly embedded into more legs."""
    phi: AffinePhaseOp
    phi_adjoint: AffinePhaseOp
    phi_prime: QuadraticFourierOp
    phi_prime_adjoint: QuadraticFourierOp
    name: str = "R"

    def apply_to(self, v: GaussianSliceVector) -> GaussianSliceVector:
        return apply_affine(self.phi, apply_quadratic_fourier(self.phi_prime, v))

    def apply_adjoint(self, v: GaussianSliceVector) -> GaussianSliceVector:
        return apply_quadratic_fourier(self.phi_prime_adjoint, apply_affine(self.phi_adjoint, v))

    def embedded(self, which: Sequence[int], total: int) -> "RMatrixOperator":
        label = "".join(str(i + 1) for i in which)
        return RMatrixOperator(
            embed_legs(self.phi, which, total),
            embed_legs(self.phi_adjoint, which, total),
            self.phi_prime.embedded(which, total),
            self.phi_prime_adjoint.embedded(which, total),
            f"{self.name}_{label}",
        )

    @property
    def adjoint(self) -> "RMatrixAdjoint":
        return RMatrixAdjoint(self)


@dataclass
class RMatrixAdjoint:
    """R* as an applicable operator."""
    of: RMatrixOperator

    @property
    def name(self) -> str:
        return f"{self.of.name}*"

    def apply_to(self, v: GaussianSliceVector) -> GaussianSliceVector:
        return self.of.apply_adjoint(v)


def build_R(params: ModelParams) -> RMatrixOperator:
    """R on ℋ̃⊗ℋ̃; the Φ, Φ′ factors do not involve ℏ."""
    phi = build_Phi(params)
    return RMatrixOperator(phi, adjoint(phi), build_PhiPrime(params), build_PhiPrime_adjoint(params))


# ═══════════════════════════════════════════════════════════════
# FUNCTION PICTURE
# ═══════════════════════════════════════════════════════════════

def _unpack(P: np.ndarray):
    P = np.asarray(P, dtype=float)
    return P[..., 0], P[..., 1], P[..., 2], P[..., 3], P[..., 4], P[..., 5], P[..., 6], P[..., 7]


def function_Phi(P: np.ndarray, lam: float) -> np.ndarray:
    """Φ(P) = ē[λ(rs' + r's)] at points (..., 8) in (p,q,r,s,p',q',r',s'), n = 1."""
    p, q, r, s, p2, q2, r2, s2 = _unpack(P)
    return ebar(lam * (r * s2 + r2 * s))


def function_PhiPrime(P: np.ndarray, lam: float) -> np.ndarray:
    """Φ′(P) = ē[2λe^{-λr'} p·q'], n = 1."""
    p, q, r, s, p2, q2, r2, s2 = _unpack(P)
    return ebar(2 * lam * np.exp(-lam * r2) * p * q2)


def function_R(P: np.ndarray, lam: float) -> np.ndarray:
    """R(P) = Φ(P)·Φ′(P), n = 1."""
    return function_Phi(P, lam) * function_PhiPrime(P, lam)


# ═══════════════════════════════════════════════════════════════
# QUADRATURE ORACLE
# ═══════════════════════════════════════════════════════════════

def phi_prime_by_quadrature(v: GaussianSliceVector, X: np.ndarray, lam: float,
                            half_width: float = 8.0, points: int = 801) -> np.ndarray:
    """
    Φ′v at points X (N, 8) by trapezoid quadrature of the reduced (x̃, ỹ) kernel, n = 1.

    The integrand decays like the Gaussian v, so the window is centered
    on x and y' and the trapezoid rule converges spectrally.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    u = np.linspace(-half_width, half_width, points)
    h = u[1] - u[0]
    out = np.empty(X.shape[0], dtype=complex)
    for k, x in enumerate(X):
        kappa = 2 * lam * np.exp(-lam * x[6])
        xt = x[0] + u[:, None] * np.ones((1, points))
        yt = x[5] + np.ones((points, 1)) * u[None, :]
        Z = np.broadcast_to(x[v.signature.fast_index], (points, points, 4)).copy()
        Z[..., 0] = x[0] - xt
        Z[..., 3] = x[5] - yt
        vals = v.slice_values(x[v.signature.slow_index], Z.reshape(-1, 4)).reshape(points, points)
        kernel = e(xt * yt / kappa) * ebar(eta(lam, x[2]) * xt * x[1]) / abs(kappa)
        out[k] = np.sum(kernel * vals) * h * h
    return out


def R_by_quadrature(v: GaussianSliceVector, X: np.ndarray, params: ModelParams, **kw) -> np.ndarray:
    """(Rv)(X) = (Φ′v)(S_Φ X) with Φ′ by quadrature."""
    S, amp, _ = build_Phi(params).evaluate(np.atleast_2d(X))
    return amp * phi_prime_by_quadrature(v, S, params.lam, **kw)
