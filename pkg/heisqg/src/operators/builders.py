"""
Operator Builders - Every named operator as an exact descriptor

PURPOSE:
    Transcribes the building blocks, multiplicative unitaries, coproducts,
    the antiunitary T and the R-matrix factors into AffinePhaseOps (or,
    for the genuinely integral ones, QuadraticFourierOps).

THEORY:
    With s' = e^{-λr'} and η = ℏ·η_λ on the Hilbert-space side:

        L_{a,b,c}ξ(x,y,r)  = ē[rc] ē[η(r)β(a, y-b)] ξ(x-a, y-b, r)
        V_σξ(X)            = ē[η(r')β(x, y'-y)] ξ(x, y, r+r', x'-x, y'-y, r')
        Wξ(X)              = s'ⁿ ξ(s'x, s'y, r, x', y', r')
        U                  = W V_σ
        Tξ(x,y,r)          = e^{nλr} conj ξ(e^{λr}x, e^{λr}y, -r)
        ΔL_{a,b,c}         = U (L_{a,b,c} ⊗ 1) U*

    The extended legs add w, the fourth block parameter d, and Ũ, Δ̃L,
    Φ. Builders named *_ext act on the (x, y, r, w) picture.

    A function φ whose fast inverse transform is φ^∨ acts by

        (L_φ ξ)(x,y,r) = ∫ φ^∨(a,b,r) ē[η(r)β(a, y-b)] ξ(x-a, y-b, r) da db

    which for Gaussian φ is a QuadraticFourierOp with auxiliary (a, b).

ARCHITECTURE ROLE:
    Consumed by operators/checks.py, operators/rmatrix.py and the
    comultiplication kernel suite.

DEBUGGING NOTES:
    - build_DeltaL and build_DeltaL_ext are transcriptions of the closed
      forms, deliberately independent of U; checks compare them with the
      U-conjugation.
    - Builders use params.hbar in η only on the Hilbert-space side; the
      R-matrix factors Φ, Φ′ are ℏ-free.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import sympy

from functions.closed_form import GaussianClosedForm, GaussianTerm
from groups.params import ModelParams
from operators.affine import AffinePhaseOp, adjoint, compose_all, embed_legs, flip, identity
from operators.expr import LegSignature, as_vector, beta_expr, eta_expr, num, scale, vsub
from operators.gaussian import QuadraticFourierOp, aux_symbols
from utils.errors import DimensionError, UnsupportedOperatorError

logger = logging.getLogger(__name__)


def hilbert_signature(params: ModelParams, legs: int = 1, extended: bool = False) -> LegSignature:
    return LegSignature(params.n, legs, "xyrw" if extended else "xyr")


def _assemble(sig: LegSignature, updates: dict):
    return tuple(updates.get(s, s) for s in sig.symbols)


def _leg_updates(leg, x=None, y=None, r=None, w=None) -> dict:
    out = {}
    if x is not None:
        out.update(zip(leg.x, x))
    if y is not None:
        out.update(zip(leg.y, y))
    if r is not None:
        out[leg.r] = r
    if w is not None:
        out[leg.w] = w
    return out


def _eta(params: ModelParams, s) -> sympy.Expr:
    return params.hbar * eta_expr(params.lam, s)


def _exp(c: float, s) -> sympy.Expr:
    return sympy.exp(sympy.Float(c) * s)


# ═══════════════════════════════════════════════════════════════
# BUILDING BLOCKS
# ═══════════════════════════════════════════════════════════════

def build_block_realization(params: ModelParams, A: Sequence, B: Sequence, C=0, D=None,
                            signature: Optional[LegSignature] = None, leg: int = 0,
                            name: str = "L") -> AffinePhaseOp:
    """
    Realization of ē[p·A + q·B + C (+ s·D)] on one leg.

    A, B, C, D may be expressions in slow coordinates (central), which is
    how transformed blocks such as the dagger of L_{a,b,c} are written.
    """
    sig = signature or hilbert_signature(params, 1, D is not None)
    L = sig.leg(leg)
    A = tuple(sympy.sympify(v) for v in A)
    B = tuple(sympy.sympify(v) for v in B)
    if len(A) != params.n or len(B) != params.n:
        raise DimensionError(f"block parameters need length n={params.n}")
    phase = sympy.sympify(C) + _eta(params, L.r) * beta_expr(A, vsub(L.y, B))
    if D is None:
        upd = _leg_updates(L, vsub(L.x, A), vsub(L.y, B))
    else:
        D = sympy.sympify(D)
        upd = _leg_updates(L, scale(sympy.exp(-D), vsub(L.x, A)), scale(sympy.exp(D), vsub(L.y, B)),
                           w=L.w - D)
    return AffinePhaseOp(sig, _assemble(sig, upd), 1, phase, False, name)


def build_L_block(a, b, c: float, params: ModelParams) -> AffinePhaseOp:
    """L_{a,b,c} on ℋ."""
    n = params.n
    r = hilbert_signature(params).leg(0).r
    return build_block_realization(params, as_vector(a, n), as_vector(b, n), r * num(c), name="L")


def build_L_ext(a, b, c: float, d: float, params: ModelParams) -> AffinePhaseOp:
    """L_{a,b,c,d} on ℋ̃."""
    n = params.n
    r = hilbert_signature(params, 1, True).leg(0).r
    return build_block_realization(params, as_vector(a, n), as_vector(b, n), r * num(c), num(d), name="L~")


def build_block_dagger(a, b, c: float, params: ModelParams) -> AffinePhaseOp:
    """
    Realization of (L_{a,b,c})†(p,q,r) = ē[e^{-λr}(p·a + q·b) + rc].
    """
    n = params.n
    r = hilbert_signature(params).leg(0).r
    s = _exp(-params.lam, r)
    return build_block_realization(params, scale(s, as_vector(a, n)), scale(s, as_vector(b, n)),
                                   r * num(c), name="L†")


# ═══════════════════════════════════════════════════════════════
# MULTIPLICATIVE UNITARIES
# ═══════════════════════════════════════════════════════════════

def build_V(params: ModelParams) -> AffinePhaseOp:
    """Multiplicative unitary of the ℏ-deformed Heisenberg group (η replaced by r')."""
    sig = hilbert_signature(params, 2)
    L1, L2 = sig.leg(0), sig.leg(1)
    phase = params.hbar * L2.r * beta_expr(L1.x, vsub(L2.y, L1.y))
    upd = _leg_updates(L1, r=L1.r + L2.r)
    upd.update(_leg_updates(L2, vsub(L2.x, L1.x), vsub(L2.y, L1.y)))
    return AffinePhaseOp(sig, _assemble(sig, upd), 1, phase, False, "V")


def build_V_sigma(params: ModelParams) -> AffinePhaseOp:
    sig = hilbert_signature(params, 2)
    L1, L2 = sig.leg(0), sig.leg(1)
    phase = _eta(params, L2.r) * beta_expr(L1.x, vsub(L2.y, L1.y))
    upd = _leg_updates(L1, r=L1.r + L2.r)
    upd.update(_leg_updates(L2, vsub(L2.x, L1.x), vsub(L2.y, L1.y)))
    return AffinePhaseOp(sig, _assemble(sig, upd), 1, phase, False, "V_sigma")


def build_W(params: ModelParams) -> AffinePhaseOp:
    sig = hilbert_signature(params, 2)
    L1, L2 = sig.leg(0), sig.leg(1)
    s = _exp(-params.lam, L2.r)
    upd = _leg_updates(L1, scale(s, L1.x), scale(s, L1.y))
    return AffinePhaseOp(sig, _assemble(sig, upd), s ** params.n, 0, False, "W")


def build_U(params: ModelParams) -> AffinePhaseOp:
    """U = W V_σ, written out."""
    sig = hilbert_signature(params, 2)
    L1, L2 = sig.leg(0), sig.leg(1)
    s = _exp(-params.lam, L2.r)
    sx, sy = scale(s, L1.x), scale(s, L1.y)
    phase = _eta(params, L2.r) * beta_expr(sx, vsub(L2.y, sy))
    upd = _leg_updates(L1, sx, sy, L1.r + L2.r)
    upd.update(_leg_updates(L2, vsub(L2.x, sx), vsub(L2.y, sy)))
    return AffinePhaseOp(sig, _assemble(sig, upd), s ** params.n, phase, False, "U")


def build_W_ext(params: ModelParams) -> AffinePhaseOp:
    sig = hilbert_signature(params, 2, True)
    L1, L2 = sig.leg(0), sig.leg(1)
    s = _exp(-params.lam, L2.r)
    upd = _leg_updates(L1, scale(s, L1.x), scale(s, L1.y))
    return AffinePhaseOp(sig, _assemble(sig, upd), s ** params.n, 0, False, "W~")


def build_V_sigma_ext(params: ModelParams) -> AffinePhaseOp:
    sig = hilbert_signature(params, 2, True)
    L1, L2 = sig.leg(0), sig.leg(1)
    phase = _eta(params, L2.r) * beta_expr(L1.x, vsub(L2.y, L1.y))
    upd = _leg_updates(L1, r=L1.r + L2.r)
    upd.update(_leg_updates(L2, scale(sympy.exp(-L1.w), vsub(L2.x, L1.x)),
                            scale(sympy.exp(L1.w), vsub(L2.y, L1.y)), w=L2.w - L1.w))
    return AffinePhaseOp(sig, _assemble(sig, upd), 1, phase, False, "V_sigma~")


def build_U_ext(params: ModelParams) -> AffinePhaseOp:
    """Ũ = W̃ Ṽ_σ, written out."""
    sig = hilbert_signature(params, 2, True)
    L1, L2 = sig.leg(0), sig.leg(1)
    s = _exp(-params.lam, L2.r)
    sx, sy = scale(s, L1.x), scale(s, L1.y)
    phase = _eta(params, L2.r) * beta_expr(sx, vsub(L2.y, sy))
    upd = _leg_updates(L1, sx, sy, L1.r + L2.r)
    upd.update(_leg_updates(L2, scale(sympy.exp(-L1.w), vsub(L2.x, sx)),
                            scale(sympy.exp(L1.w), vsub(L2.y, sy)), w=L2.w - L1.w))
    return AffinePhaseOp(sig, _assemble(sig, upd), s ** params.n, phase, False, "U~")


def build_T(params: ModelParams) -> AffinePhaseOp:
    """Antiunitary involution T; TφT = φ†."""
    sig = hilbert_signature(params)
    L = sig.leg(0)
    s = _exp(params.lam, L.r)
    upd = _leg_updates(L, scale(s, L.x), scale(s, L.y), -L.r)
    return AffinePhaseOp(sig, _assemble(sig, upd), s ** params.n, 0, True, "T")


# ═══════════════════════════════════════════════════════════════
# COPRODUCTS OF BUILDING BLOCKS
# ═══════════════════════════════════════════════════════════════

def build_DeltaL(a, b, c: float, params: ModelParams) -> AffinePhaseOp:
    """Closed form of ΔL_{a,b,c} on ℋ⊗ℋ."""
    sig = hilbert_signature(params, 2)
    L1, L2 = sig.leg(0), sig.leg(1)
    a, b = as_vector(a, params.n), as_vector(b, params.n)
    s = _exp(-params.lam, L2.r)
    sy = scale(s, L1.y)
    phase = (_eta(params, L1.r + L2.r) * beta_expr(a, vsub(sy, b))
             + _eta(params, L2.r) * beta_expr(a, vsub(L2.y, sy))
             + (L1.r + L2.r) * num(c))
    upd = _leg_updates(L1, vsub(L1.x, scale(1 / s, a)), vsub(L1.y, scale(1 / s, b)))
    upd.update(_leg_updates(L2, vsub(L2.x, a), vsub(L2.y, b)))
    return AffinePhaseOp(sig, _assemble(sig, upd), 1, phase, False, "DeltaL")


def build_DeltaOpL(a, b, c: float, params: ModelParams) -> AffinePhaseOp:
    """Closed form of Δ^op L_{a,b,c} = Σ(ΔL)Σ."""
    sig = hilbert_signature(params, 2)
    L1, L2 = sig.leg(0), sig.leg(1)
    a, b = as_vector(a, params.n), as_vector(b, params.n)
    s = _exp(-params.lam, L1.r)
    sy = scale(s, L2.y)
    phase = (_eta(params, L1.r + L2.r) * beta_expr(a, vsub(sy, b))
             + _eta(params, L1.r) * beta_expr(a, vsub(L1.y, sy))
             + (L1.r + L2.r) * num(c))
    upd = _leg_updates(L1, vsub(L1.x, a), vsub(L1.y, b))
    upd.update(_leg_updates(L2, vsub(L2.x, scale(1 / s, a)), vsub(L2.y, scale(1 / s, b))))
    return AffinePhaseOp(sig, _assemble(sig, upd), 1, phase, False, "DeltaOpL")


def build_DeltaL_ext(a, b, c: float, d: float, params: ModelParams) -> AffinePhaseOp:
    """Closed form of Δ̃L_{a,b,c,d} on ℋ̃⊗ℋ̃."""
    sig = hilbert_signature(params, 2, True)
    L1, L2 = sig.leg(0), sig.leg(1)
    a, b = as_vector(a, params.n), as_vector(b, params.n)
    d = num(d)
    t = _exp(params.lam, L2.r)
    phase = (_eta(params, L1.r) * beta_expr(scale(t, a), vsub(L1.y, scale(t, b)))
             + _eta(params, L2.r) * beta_expr(a, vsub(L2.y, b))
             + (L1.r + L2.r) * num(c))
    em, ep = sympy.exp(-d), sympy.exp(d)
    upd = _leg_updates(L1, scale(em, vsub(L1.x, scale(t, a))), scale(ep, vsub(L1.y, scale(t, b))),
                       w=L1.w - d)
    upd.update(_leg_updates(L2, scale(em, vsub(L2.x, a)), scale(ep, vsub(L2.y, b)), w=L2.w - d))
    return AffinePhaseOp(sig, _assemble(sig, upd), 1, phase, False, "DeltaL~")


def build_R_conjugated_DeltaL(a, b, c: float, d: float, params: ModelParams) -> AffinePhaseOp:
    """Closed form of R Δ̃L_{a,b,c,d} R*, written out independently of Δ̃^op."""
    sig = hilbert_signature(params, 2, True)
    L1, L2 = sig.leg(0), sig.leg(1)
    a, b = as_vector(a, params.n), as_vector(b, params.n)
    d = num(d)
    t = _exp(params.lam, L1.r)
    phase = (_eta(params, L1.r) * beta_expr(a, vsub(L1.y, b))
             + _eta(params, L2.r) * beta_expr(scale(t, a), vsub(L2.y, scale(t, b)))
             + (L1.r + L2.r) * num(c))
    em, ep = sympy.exp(-d), sympy.exp(d)
    upd = _leg_updates(L1, scale(em, vsub(L1.x, a)), scale(ep, vsub(L1.y, b)), w=L1.w - d)
    upd.update(_leg_updates(L2, vsub(scale(em, L2.x), scale(t * em, a)),
                            vsub(scale(ep, L2.y), scale(t * ep, b)), w=L2.w - d))
    return AffinePhaseOp(sig, _assemble(sig, upd), 1, phase, False, "R DeltaL~ R*")


def build_DeltaOpL_ext(a, b, c: float, d: float, params: ModelParams) -> AffinePhaseOp:
    """Δ̃^op L = Σ(Δ̃L)Σ."""
    return flip(build_DeltaL_ext(a, b, c, d, params))


def coproduct_by_conjugation(op: AffinePhaseOp, U: AffinePhaseOp, U_star: Optional[AffinePhaseOp] = None) -> AffinePhaseOp:
    """U (op ⊗ 1) U* for a one-leg op and a two-leg multiplicative unitary."""
    U_star = U_star or adjoint(U)
    return compose_all(U, embed_legs(op, (0,), 2), U_star)


# ═══════════════════════════════════════════════════════════════
# Φ AND MULTIPLIER ACTIONS
# ═══════════════════════════════════════════════════════════════

def build_Phi(params: ModelParams) -> AffinePhaseOp:
    """Φ on ℋ̃⊗ℋ̃ (unitary substitution, no phase)."""
    sig = hilbert_signature(params, 2, True)
    L1, L2 = sig.leg(0), sig.leg(1)
    lam = params.lam
    s2, s1 = _exp(-lam, L2.r), _exp(-lam, L1.r)
    upd = _leg_updates(L1, scale(s2, L1.x), scale(1 / s2, L1.y), w=L1.w - lam * L2.r)
    upd.update(_leg_updates(L2, scale(s1, L2.x), scale(1 / s1, L2.y), w=L2.w - lam * L1.r))
    return AffinePhaseOp(sig, _assemble(sig, upd), 1, 0, False, "Phi")


@dataclass
class MultiplierActions:
    """Left (X ↦ M·X) and right (X ↦ X·M) actions on two-leg functions."""
    left: AffinePhaseOp
    right: AffinePhaseOp


def build_Phi_mult_actions(params: ModelParams) -> MultiplierActions:
    """
    (ΦF)(P) = ē[λ(rs'+r's)] F(e^{λr'}p, e^{-λr'}q, r, s, e^{λr}p', e^{-λr}q', r', s')
    (FΦ)(P) = ē[λ(rs'+r's)] F(P)
    """
    sig = LegSignature(params.n, 2, "pqrs")
    L1, L2 = sig.leg(0), sig.leg(1)
    lam = params.lam
    phase = lam * (L1.r * L2.s + L2.r * L1.s)
    upd = _leg_updates(L1, scale(_exp(lam, L2.r), L1.p), scale(_exp(-lam, L2.r), L1.q))
    upd.update(_leg_updates(L2, scale(_exp(lam, L1.r), L2.p), scale(_exp(-lam, L1.r), L2.q)))
    left = AffinePhaseOp(sig, _assemble(sig, upd), 1, phase, False, "Phi·")
    right = AffinePhaseOp(sig, sig.symbols, 1, phase, False, "·Phi")
    return MultiplierActions(left, right)


def build_PhiPrime_mult_actions(params: ModelParams) -> MultiplierActions:
    """
    Left action in the (p,q,r,s) picture, right action in the (p,q,r,w) picture:

        (Φ′F)(P) = ē[κ p·q'] F(p, q + κη(r)q', r, s, p', q', r', s'),  κ = 2λe^{-λr'}
        (FΦ′)(P) = ē[κ̃ p·q'] F(p, q, r, w, p' + κ̃η(r')p, q', r', w'), κ̃ = 2λe^{-λr'+w-w'}
    """
    lam = params.lam
    sig = LegSignature(params.n, 2, "pqrs")
    L1, L2 = sig.leg(0), sig.leg(1)
    kappa = 2 * lam * _exp(-lam, L2.r)
    upd = _leg_updates(L1, y=tuple(q + kappa * eta_expr(lam, L1.r) * q2 for q, q2 in zip(L1.q, L2.q)))
    left = AffinePhaseOp(sig, _assemble(sig, upd), 1, kappa * beta_expr(L1.p, L2.q), False, "Phi'·")

    sigw = LegSignature(params.n, 2, "pqrw")
    M1, M2 = sigw.leg(0), sigw.leg(1)
    kt = 2 * lam * sympy.exp(-lam * M2.r + M1.w - M2.w)
    upd = _leg_updates(M2, tuple(p2 + kt * eta_expr(lam, M2.r) * p for p, p2 in zip(M1.p, M2.p)))
    right = AffinePhaseOp(sigw, _assemble(sigw, upd), 1, kt * beta_expr(M1.p, M2.q), False, "·Phi'")
    return MultiplierActions(left, right)


# ═══════════════════════════════════════════════════════════════
# FUNCTION REALIZATIONS
# ═══════════════════════════════════════════════════════════════

def build_kernel_realization(signature: LegSignature, params: ModelParams, log_kernel: sympy.Expr,
                             aux: Sequence[sympy.Symbol], weight=None, name: str = "L_F") -> QuadraticFourierOp:
    """
    Operator of a function on `signature.legs` copies of G from its fast inverse transform.

    `aux` lists (a, b) per leg, n each; `log_kernel` is log F^∨ as an
    expression in aux and slow coordinates.
    """
    n = signature.n
    if len(aux) != 2 * n * signature.legs:
        raise DimensionError(f"need {2 * n * signature.legs} auxiliary variables, got {len(aux)}")
    phase = sympy.I * sympy.sympify(log_kernel) / (2 * sympy.pi)
    upd = {}
    for i in range(signature.legs):
        L = signature.leg(i)
        a = aux[2 * n * i: 2 * n * i + n]
        b = aux[2 * n * i + n: 2 * n * (i + 1)]
        phase = phase + _eta(params, L.r) * beta_expr(a, vsub(L.y, b))
        upd.update(_leg_updates(L, vsub(L.x, a), vsub(L.y, b)))
    return QuadraticFourierOp(signature, tuple(aux), _assemble(signature, upd), phase, 1, weight, name)


def gaussian_log(term: GaussianTerm, u: Sequence[sympy.Expr], conjugate: bool = False) -> sympy.Expr:
    """log of coef·exp(-π(u-μ)ᵀA(u-μ) + 2πi k·u) as a sympy expression (constant poly only)."""
    if not term.constant_poly:
        raise UnsupportedOperatorError("Gaussian kernel needs a constant polynomial factor")
    coef = complex(term.coef * sum(term.poly.values()))
    A, k = term.A, term.k
    if conjugate:
        coef, A, k = np.conj(coef), np.conj(A), -k
    d = [ui - num(m) for ui, m in zip(u, term.mu)]
    quad = sympy.Add(*[num(A[i, j]) * d[i] * d[j] for i in range(len(d)) for j in range(len(d))])
    lin = sympy.Add(*[num(kk) * ui for kk, ui in zip(k, u)])
    return num(np.log(coef)) - sympy.pi * quad + 2 * sympy.pi * sympy.I * lin


def _single_term(phi: GaussianClosedForm, n: int) -> GaussianTerm:
    if not isinstance(phi, GaussianClosedForm) or len(phi.terms) != 1:
        raise UnsupportedOperatorError("function operator needs a single-term Gaussian closed form")
    if phi.picture != "pqr":
        raise DimensionError(f"function operator expects a (p,q,r) function, got {phi.picture}")
    if phi.terms[0].mu.size != 2 * n:
        raise DimensionError(f"closed form has {phi.terms[0].mu.size} fast coordinates, need {2 * n}")
    return phi.terms[0]


def build_function_operator(phi: GaussianClosedForm, params: ModelParams, dagger: bool = False) -> QuadraticFourierOp:
    """
    L_φ (or L_{φ†}) for a single-term Gaussian φ(p,q,r).

    (φ†)^∨(u, r) = σ^{-2n} conj φ^∨(u/σ, -r) with σ = e^{-λr}.
    """
    n = params.n
    term = _single_term(phi, n).transformed(+1)
    sig = hilbert_signature(params)
    r = sig.leg(0).r
    aux = aux_symbols("ab", n)
    if dagger:
        inv_sigma = _exp(params.lam, r)
        log_k = gaussian_log(term, scale(inv_sigma, aux), conjugate=True) + 2 * n * params.lam * r

        def weight(s):
            return complex(phi.slow_factor(-np.asarray(s, dtype=float)[None, :])[0])
    else:
        log_k = gaussian_log(term, aux)

        def weight(s):
            return complex(phi.slow_factor(np.asarray(s, dtype=float)[None, :])[0])

    name = f"L_{phi.name or 'phi'}" + ("†" if dagger else "")
    return build_kernel_realization(sig, params, log_k, aux, weight, name)


def function_operator_kernel(op_phi: GaussianClosedForm, params: ModelParams, points: np.ndarray,
                             dagger: bool = False) -> np.ndarray:
    """Numeric φ^∨ (or (φ†)^∨) at points (N, 3) of (a, b, r), from the same expressions the operator uses."""
    n = params.n
    term = _single_term(op_phi, n).transformed(+1)
    a, b, r = sympy.symbols("ka kb kr", real=True)
    if dagger:
        inv_sigma = _exp(params.lam, r)
        log_k = gaussian_log(term, (inv_sigma * a, inv_sigma * b), conjugate=True) + 2 * n * params.lam * r
    else:
        log_k = gaussian_log(term, (a, b))
    f = sympy.lambdify((a, b, r), sympy.exp(log_k), modules="numpy")
    pts = np.asarray(points, dtype=float)
    slow = -pts[:, 2:3] if dagger else pts[:, 2:3]
    return np.asarray(f(pts[:, 0], pts[:, 1], pts[:, 2]), dtype=complex) * op_phi.slow_factor(slow)


def identity_on(params: ModelParams, legs: int = 1, extended: bool = False) -> AffinePhaseOp:
    return identity(hilbert_signature(params, legs, extended))
