"""
Affine Phase Operators - Exact "substitution + phase + amplitude" calculus

PURPOSE:
    Represents every multiplicative unitary, building block and coproduct
    operator as

        (Aξ)(X) = amp(X) · ē[phase(X)] · ξ(S(X))        (linear)
        (Aξ)(X) = amp(X) · ē[phase(X)] · conj ξ(S(X))   (antilinear)

    and composes, inverts, embeds and compares such operators exactly.

THEORY:
    Composition (A∘B)ξ = A(Bξ):

        substitution  S_B ∘ S_A
        amplitude     amp_A · (amp_B∘S_A)        conj(...) if A antilinear
        phase         φ_A + φ_B∘S_A              φ_A - φ_B∘S_A if A antilinear
        antilinear    A xor B

    Every operator here has a slow map that is affine with a constant
    matrix and a fast map M(s)z + t(s). Inverting the slow part first
    reduces the fast part to a linear solve, so inverses stay symbolic.

    The adjoint pulls back through S⁻¹ and divides by |det DS|; the
    operator is unitary (or antiunitary) exactly when |amp|² = |det DS|.

ARCHITECTURE ROLE:
    builders.py produces AffinePhaseOps; checks.py compares them with
    equal_randomized(); gaussian.py applies them to Gaussian vectors.

DEBUGGING NOTES:
    - Equality is decided at random points, not by symbolic normal forms.
      The combined factor amp·ē[phase] is compared, so a sign carried by
      the amplitude and a half-period in the phase count as equal.
    - A witness is the worst sampled point; re-evaluate both operators
      there with evaluate() to see which component disagrees.
"""

import json
import logging
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from operators.expr import (
    LegSignature,
    compile_exprs,
    depends_on,
    expr_from_json,
    expr_to_json,
    exprs_to_json,
    leg_renaming,
)
from utils.errors import SignatureError, UnsupportedOperatorError
from utils.numerics import ebar, make_rng

logger = logging.getLogger(__name__)

DEFAULT_TRIALS = 100
DEFAULT_TOL = 1e-9


# ═══════════════════════════════════════════════════════════════
# OPERATOR TYPE
# ═══════════════════════════════════════════════════════════════

@dataclass(frozen=True, eq=False)
class AffinePhaseOp:
    """
    Substitution operator with a phase and an amplitude.

    Attributes:
        signature: Legs, n and coordinate picture
        substitution: One expression per coordinate, in signature.symbols order
        amplitude: Multiplier in front (real or complex)
        phase: ē-exponent
        antilinear: Conjugates the input vector when set
        name: Label used in reports and JSON
    """
    signature: LegSignature
    substitution: Tuple[sympy.Expr, ...]
    amplitude: sympy.Expr = sympy.Integer(1)
    phase: sympy.Expr = sympy.Integer(0)
    antilinear: bool = False
    name: str = ""

    def __post_init__(self):
        sub = tuple(sympy.sympify(e) for e in self.substitution)
        if len(sub) != self.signature.dim:
            raise SignatureError(
                f"{self.name or 'operator'}: {len(sub)} substitution entries for {self.signature.dim} coordinates")
        object.__setattr__(self, "substitution", sub)
        object.__setattr__(self, "amplitude", sympy.sympify(self.amplitude))
        object.__setattr__(self, "phase", sympy.sympify(self.phase))

    @cached_property
    def _compiled(self) -> Callable[[np.ndarray], np.ndarray]:
        exprs = list(self.substitution) + [self.amplitude, self.phase]
        return compile_exprs(exprs, self.signature.symbols)

    def evaluate(self, X: np.ndarray):
        """
        Components at points X (N, dim).

        Returns:
            (S(X) real (N, dim), amp (N,) complex, phase (N,))
        """
        out = self._compiled(X)
        D = self.signature.dim
        S = out[:, :D].real
        amp = out[:, D]
        phase = out[:, D + 1]
        if not np.any(phase.imag):
            phase = phase.real
        return S, amp, phase

    def factor(self, X: np.ndarray) -> np.ndarray:
        """amp(X)·ē[phase(X)]."""
        _, amp, phase = self.evaluate(X)
        return amp * ebar(phase)

    def apply(self, xi: Callable[[np.ndarray], np.ndarray], X: np.ndarray) -> np.ndarray:
        """(Aξ)(X) for a pointwise vector ξ: (N, dim) -> (N,)."""
        S, amp, phase = self.evaluate(X)
        vals = np.asarray(xi(S), dtype=complex)
        if self.antilinear:
            vals = np.conj(vals)
        return amp * ebar(phase) * vals

    def to_dict(self) -> dict:
        return {
            "kind": "affine",
            "name": self.name,
            "signature": self.signature.to_dict(),
            "substitution": exprs_to_json(self.substitution),
            "amplitude": expr_to_json(self.amplitude),
            "phase": expr_to_json(self.phase),
            "antilinear": self.antilinear,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, doc: dict) -> "AffinePhaseOp":
        if doc.get("kind") != "affine":
            raise UnsupportedOperatorError(f"not an affine operator descriptor: {doc.get('kind')!r}")
        return cls(
            LegSignature(**doc["signature"]),
            tuple(expr_from_json(t) for t in doc["substitution"]),
            expr_from_json(doc["amplitude"]),
            expr_from_json(doc["phase"]),
            bool(doc["antilinear"]),
            doc.get("name", ""),
        )

    @classmethod
    def from_json(cls, text: str) -> "AffinePhaseOp":
        return cls.from_dict(json.loads(text))

    def __repr__(self) -> str:
        kind = "antilinear" if self.antilinear else "linear"
        return f"AffinePhaseOp({self.name or '?'}, legs={self.signature.legs}, {kind})"


def identity(signature: LegSignature) -> AffinePhaseOp:
    return AffinePhaseOp(signature, signature.symbols, name="id")


def multiplication_op(signature: LegSignature, phase=0, amplitude=1, name: str = "mult") -> AffinePhaseOp:
    """ξ ↦ amplitude·ē[phase]·ξ."""
    return AffinePhaseOp(signature, signature.symbols, amplitude, phase, False, name)


def _pull(op: AffinePhaseOp) -> dict:
    return dict(zip(op.signature.symbols, op.substitution))


def _require_same(a: AffinePhaseOp, b: AffinePhaseOp):
    if a.signature != b.signature:
        raise SignatureError(f"signature mismatch: {a.signature} vs {b.signature}")


# ═══════════════════════════════════════════════════════════════
# COMPOSITION
# ═══════════════════════════════════════════════════════════════

def compose(a: AffinePhaseOp, b: AffinePhaseOp) -> AffinePhaseOp:
    """A∘B: apply B first, then A."""
    _require_same(a, b)
    m = _pull(a)
    sub = tuple(e.xreplace(m) for e in b.substitution)
    amp_b = b.amplitude.xreplace(m)
    phase_b = b.phase.xreplace(m)
    if a.antilinear:
        amp = a.amplitude * sympy.conjugate(amp_b)
        phase = a.phase - phase_b
    else:
        amp = a.amplitude * amp_b
        phase = a.phase + phase_b
    return AffinePhaseOp(a.signature, sub, amp, phase, a.antilinear != b.antilinear,
                         f"{a.name}∘{b.name}")


def compose_all(*ops: AffinePhaseOp) -> AffinePhaseOp:
    """compose_all(A, B, C) = A∘B∘C."""
    if not ops:
        raise SignatureError("compose_all needs at least one operator")
    return reduce(compose, ops)


# ═══════════════════════════════════════════════════════════════
# STRUCTURE, INVERSE, ADJOINT
# ═══════════════════════════════════════════════════════════════

@dataclass
class AffineStructure:
    """S_slow(s) = G s + g0 with constant G; S_fast(z, s) = M(s) z + t(s)."""
    G: sympy.Matrix
    g0: sympy.Matrix
    M: sympy.Matrix
    t: sympy.Matrix


def structure(op: AffinePhaseOp) -> AffineStructure:
    """
    Split the substitution into its slow and fast parts.

    Raises:
        UnsupportedOperatorError: slow map depends on fast coordinates or
            is not affine; fast map is not affine in the fast coordinates
    """
    sig = op.signature
    fast, slow = sig.fast_symbols, sig.slow_symbols
    fast_out = sympy.Matrix([op.substitution[i] for i in sig.fast_index])
    slow_out = sympy.Matrix([op.substitution[i] for i in sig.slow_index])
    if any(depends_on(e, fast) for e in slow_out):
        raise UnsupportedOperatorError(f"{op.name}: slow substitution depends on fast coordinates")
    G = slow_out.jacobian(slow)
    if G.free_symbols:
        raise UnsupportedOperatorError(f"{op.name}: slow substitution is not affine")
    M = fast_out.jacobian(fast)
    if M.free_symbols & set(fast):
        raise UnsupportedOperatorError(f"{op.name}: fast substitution is not affine")
    zero_fast = {z: 0 for z in fast}
    zero_slow = {s: 0 for s in slow}
    return AffineStructure(G, slow_out.xreplace(zero_slow), M, fast_out.xreplace(zero_fast))


def inverse_substitution(op: AffinePhaseOp) -> Tuple[sympy.Expr, ...]:
    sig = op.signature
    st = structure(op)
    fast, slow = sig.fast_symbols, sig.slow_symbols
    if st.G.det() == 0:
        raise UnsupportedOperatorError(f"{op.name}: slow substitution is singular")
    s_in = st.G.inv() * (sympy.Matrix(slow) - st.g0)
    slow_map = dict(zip(slow, s_in))
    M_in = st.M.xreplace(slow_map)
    t_in = st.t.xreplace(slow_map)
    z_in = M_in.inv(method="LU") * (sympy.Matrix(fast) - t_in)
    out: List[sympy.Expr] = [sympy.Integer(0)] * sig.dim
    for k, i in enumerate(sig.fast_index):
        out[i] = z_in[k]
    for k, i in enumerate(sig.slow_index):
        out[i] = s_in[k]
    return tuple(out)


def jacobian_determinant(op: AffinePhaseOp) -> sympy.Expr:
    """det DS as an expression of the input coordinates."""
    st = structure(op)
    return st.M.det() * st.G.det()


def inverse(op: AffinePhaseOp) -> AffinePhaseOp:
    sub = inverse_substitution(op)
    m = dict(zip(op.signature.symbols, sub))
    amp = op.amplitude.xreplace(m)
    phase = op.phase.xreplace(m)
    if op.antilinear:
        return AffinePhaseOp(op.signature, sub, 1 / sympy.conjugate(amp), phase, True, f"{op.name}^-1")
    return AffinePhaseOp(op.signature, sub, 1 / amp, -phase, False, f"{op.name}^-1")


def adjoint(op: AffinePhaseOp) -> AffinePhaseOp:
    """
    Hilbert-space adjoint.

    Linear:      amp' = conj(amp∘S⁻¹)/|det DS∘S⁻¹|,  phase' = -φ∘S⁻¹
    Antilinear:  amp' = amp∘S⁻¹/|det DS∘S⁻¹|,        phase' = +φ∘S⁻¹
    """
    sub = inverse_substitution(op)
    m = dict(zip(op.signature.symbols, sub))
    amp = op.amplitude.xreplace(m)
    phase = op.phase.xreplace(m)
    det = sympy.Abs(jacobian_determinant(op).xreplace(m))
    if op.antilinear:
        return AffinePhaseOp(op.signature, sub, amp / det, phase, True, f"{op.name}*")
    return AffinePhaseOp(op.signature, sub, sympy.conjugate(amp) / det, -phase, False, f"{op.name}*")


def is_unitary(op: AffinePhaseOp, trials: int = DEFAULT_TRIALS, tol: float = DEFAULT_TOL,
               seed: int = 0) -> bool:
    """|amp|² = |det DS| at random points (unitary, or antiunitary if antilinear)."""
    X = op.signature.random_points(make_rng(seed), trials)
    _, amp, _ = op.evaluate(X)
    det = compile_exprs([jacobian_determinant(op)], op.signature.symbols)(X)[:, 0]
    defect = np.max(np.abs(np.abs(amp) ** 2 - np.abs(det)) / np.maximum(1.0, np.abs(det)))
    logger.debug("%s unitarity defect %.3e", op.name, defect)
    return bool(defect < tol)


# ═══════════════════════════════════════════════════════════════
# LEGS
# ═══════════════════════════════════════════════════════════════

def embed_legs(op: AffinePhaseOp, which: Sequence[int], total: int) -> AffinePhaseOp:
    """
    Act as `op` on legs `which` (0-based) of a `total`-leg space, identity elsewhere.

    embed_legs(U, (0, 1), 3) is U₁₂; embed_legs(U, (1, 0), 2) is ΣUΣ.
    """
    src = op.signature
    dst = src.with_legs(total)
    mapping = leg_renaming(src, dst, which)
    sub = list(dst.symbols)
    pos = {s: k for k, s in enumerate(dst.symbols)}
    for sym, expr in zip(src.symbols, op.substitution):
        sub[pos[mapping[sym]]] = expr.xreplace(mapping)
    label = "".join(str(i + 1) for i in which)
    return AffinePhaseOp(dst, tuple(sub), op.amplitude.xreplace(mapping), op.phase.xreplace(mapping),
                         op.antilinear, f"{op.name}_{label}")


def flip(op: AffinePhaseOp) -> AffinePhaseOp:
    """ΣAΣ for a two-leg operator."""
    if op.signature.legs != 2:
        raise SignatureError(f"flip needs two legs, got {op.signature.legs}")
    return embed_legs(op, (1, 0), 2)


def tensor(a: AffinePhaseOp, b: AffinePhaseOp) -> AffinePhaseOp:
    """A⊗B on legs (a's legs, then b's legs)."""
    if (a.signature.n, a.signature.picture) != (b.signature.n, b.signature.picture):
        raise SignatureError("tensor factors need the same n and picture")
    total = a.signature.legs + b.signature.legs
    if a.antilinear != b.antilinear:
        raise UnsupportedOperatorError("tensor of a linear and an antilinear operator")
    left = embed_legs(a, tuple(range(a.signature.legs)), total)
    right = embed_legs(b, tuple(range(a.signature.legs, total)), total)
    if a.antilinear:
        # both conjugate; composing would cancel them, so merge by hand
        m = _pull(left)
        sub = tuple(e.xreplace(m) for e in right.substitution)
        return AffinePhaseOp(left.signature, sub, left.amplitude * right.amplitude.xreplace(m),
                             left.phase + right.phase.xreplace(m), True, f"{a.name}⊗{b.name}")
    out = compose(left, right)
    return AffinePhaseOp(out.signature, out.substitution, out.amplitude, out.phase, False,
                         f"{a.name}⊗{b.name}")


# ═══════════════════════════════════════════════════════════════
# RANDOMIZED EQUALITY
# ═══════════════════════════════════════════════════════════════

@dataclass
class EqualityResult:
    """Outcome of equal_randomized()."""
    equal: bool
    max_defect: float
    witness: Optional[List[float]] = None
    component: str = ""
    trials: int = 0

    def to_dict(self) -> dict:
        return {"equal": self.equal, "max_defect": self.max_defect,
                "witness": self.witness, "component": self.component}


def equal_randomized(a: AffinePhaseOp, b: AffinePhaseOp, trials: int = DEFAULT_TRIALS,
                     tol: float = DEFAULT_TOL, seed: int = 0,
                     fast_scale: float = 2.0, slow_scale: float = 1.0) -> EqualityResult:
    """
    Compare substitution outputs and the factor amp·ē[phase] at random points.

    Fast coordinates are drawn from U[-fast_scale, fast_scale], slow ones
    from U[-slow_scale, slow_scale]. Factor defects are relative to
    max(1, |factor_b|).
    """
    _require_same(a, b)
    if a.antilinear != b.antilinear:
        return EqualityResult(False, float("inf"), None, "antilinear", 0)
    X = a.signature.random_points(make_rng(seed), trials, fast_scale, slow_scale)
    Sa, amp_a, ph_a = a.evaluate(X)
    Sb, amp_b, ph_b = b.evaluate(X)
    fa = amp_a * ebar(ph_a)
    fb = amp_b * ebar(ph_b)
    d_sub = np.max(np.abs(Sa - Sb), axis=1)
    d_fac = np.abs(fa - fb) / np.maximum(1.0, np.abs(fb))
    per_point = np.maximum(d_sub, d_fac)
    k = int(np.argmax(per_point))
    worst = float(per_point[k])
    component = "substitution" if d_sub[k] >= d_fac[k] else "factor"
    result = EqualityResult(bool(worst < tol), worst, X[k].tolist(), component, trials)
    logger.debug("%s vs %s: defect %.3e (%s)", a.name, b.name, worst, component)
    return result


def swap_legs(signature: LegSignature) -> AffinePhaseOp:
    """Σ on a two-leg signature: (Σξ)(X, X') = ξ(X', X)."""
    if signature.legs != 2:
        raise SignatureError(f"swap needs two legs, got {signature.legs}")
    first, second = signature.leg(0).all, signature.leg(1).all
    return AffinePhaseOp(signature, second + first, name="Sigma")
