"""
Gaussian Slices - Complex-Gaussian test vectors and exact operator action

PURPOSE:
    Integral operators such as Φ′ and the function realizations L_φ cannot
    be composed symbolically, but they map complex Gaussians to complex
    Gaussians. This module applies AffinePhaseOps and QuadraticFourierOps
    to vectors

        ξ(z, s) = exp(-zᵀQ(s)z + b(s)·z + c(s))

    exactly, slice by slice in the slow coordinates s.

THEORY:
    Affine operator with S_fast = M(s)z + t(s), S_slow = g(s) and phase
    zᵀPz + p·z + p0:

        Q' = MᵀQ(g)M + 2πiP
        b' = Mᵀ(b(g) - 2Q(g)t) - 2πi p
        c' = c(g) + b(g)·t - tᵀQ(g)t - 2πi p0 + log amp

    (Q, b, c are conjugated first when the operator is antilinear.)

    A QuadraticFourierOp adds auxiliary variables v that are integrated
    out. With w = (z, v) the integrand is exp(-wᵀHw + ℓ·w + c0), and

        ∫ exp(-vᵀH_vv v + B·v) dv = π^{m/2} det(H_vv)^{-1/2} exp(BᵀH_vv⁻¹B/4)

    gives the new (Q, b, c) by a Schur complement. Oscillatory (Fresnel)
    integrals are the analytic continuation of this formula; for complex
    symmetric H_vv with positive semi-definite real part every eigenvalue
    has Re ≥ 0, so the principal branch of each eigenvalue's square root
    is the continuous one.

ARCHITECTURE ROLE:
    Used by rmatrix.py (R = ΦΦ′), builders.build_function_operator (L_φ)
    and the QYBE / quasitriangularity / antipode checks.

DEBUGGING NOTES:
    - A slice whose auxiliary form has condition number above
      SINGULAR_CONDITION raises SingularSliceError; evaluate() turns those
      rows into NaN and reports them.
    - Re Q' must stay positive definite for unitary operators; a negative
      eigenvalue means a sign error in a phase.
"""

import logging
import weakref
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
import sympy

from operators.affine import AffinePhaseOp
from operators.expr import LegSignature, compile_exprs, depends_on, leg_renaming
from utils.errors import SignatureError, SingularSliceError, UnsupportedOperatorError

logger = logging.getLogger(__name__)

SINGULAR_CONDITION = 1e12
TWO_PI_I = 2j * np.pi

SliceParams = Tuple[np.ndarray, np.ndarray, complex]


# ═══════════════════════════════════════════════════════════════
# GAUSSIAN INTEGRAL
# ═══════════════════════════════════════════════════════════════

def gaussian_integral(H: np.ndarray, B: np.ndarray, C: complex = 0.0) -> complex:
    """
    log ∫ exp(-vᵀHv + B·v + C) dv over ℝᵐ.

    Raises:
        SingularSliceError: H numerically singular
    """
    H = np.atleast_2d(np.asarray(H, dtype=complex))
    B = np.atleast_1d(np.asarray(B, dtype=complex))
    m = H.shape[0]
    if np.linalg.cond(H) > SINGULAR_CONDITION:
        raise SingularSliceError("degenerate Gaussian form")
    sol = np.linalg.solve(H, B)
    eig = np.linalg.eigvals(H)
    return complex(C + B @ sol / 4 + 0.5 * m * np.log(np.pi) - 0.5 * np.sum(np.log(eig)))


# ═══════════════════════════════════════════════════════════════
# VECTORS
# ═══════════════════════════════════════════════════════════════

class GaussianSliceVector:
    """
    exp(-zᵀQ(s)z + b(s)·z + c(s)) on a leg signature.

    Attributes:
        signature: Legs and picture; z are its fast coordinates, s its slow ones
        params: s -> (Q, b, c)
        name: Label for logs
    """

    def __init__(self, signature: LegSignature, params: Callable[[np.ndarray], SliceParams],
                 name: str = ""):
        self.signature = signature
        self.params = params
        self.name = name

    def _value(self, x: np.ndarray) -> complex:
        sig = self.signature
        z = x[sig.fast_index]
        Q, b, c = self.params(x[sig.slow_index])
        return complex(np.exp(-z @ Q @ z + b @ z + c))

    def evaluate(self, X: np.ndarray) -> Tuple[np.ndarray, list]:
        """
        Values at points X (N, dim); singular slices come back as NaN.

        Returns:
            (values, indices of skipped rows)
        """
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.empty(X.shape[0], dtype=complex)
        skipped = []
        for k, x in enumerate(X):
            try:
                out[k] = self._value(x)
            except SingularSliceError:
                out[k] = np.nan
                skipped.append(k)
        if skipped:
            logger.debug("%s: %d singular slices skipped", self.name, len(skipped))
        return out, skipped

    def __call__(self, X: np.ndarray) -> np.ndarray:
        values, skipped = self.evaluate(X)
        if skipped:
            raise SingularSliceError(f"{self.name}: singular slices at rows {skipped}", rows=skipped)
        return values

    def slice_values(self, s: np.ndarray, Z: np.ndarray) -> np.ndarray:
        """Values at many fast points Z (N, F) on one slow slice s."""
        Q, b, c = self.params(np.asarray(s, dtype=float))
        Z = np.asarray(Z, dtype=float)
        return np.exp(-np.einsum("ni,ij,nj->n", Z, Q, Z) + Z @ b + c)

    def min_real_eigenvalue(self, s: np.ndarray) -> float:
        Q, _, _ = self.params(np.asarray(s, dtype=float))
        return float(np.min(np.linalg.eigvalsh(0.5 * (Q + Q.conj().T).real)))


def standard_gaussian(signature: LegSignature, rng: Optional[np.random.Generator] = None,
                      spread: float = 0.3, name: str = "xi") -> GaussianSliceVector:
    """
    Random complex Gaussian with Re Q ≻ 0 and analytic slow dependence.

    Q = I + spread·(S₁ + iS₂) for random symmetric S₁, S₂ scaled to keep
    Re Q ≻ 0; b(s) = b₀ + B₁s; c(s) = -|s|²/2 + c₁·s. With rng=None the
    vector is exp(-|z|² - |s|²/2).
    """
    F = signature.fast_index.size
    S = signature.slow_index.size
    if rng is None:
        Q = np.eye(F, dtype=complex)
        b0 = np.zeros(F, dtype=complex)
        B1 = np.zeros((F, S), dtype=complex)
        c1 = np.zeros(S, dtype=complex)
    else:
        def sym(k):
            a = rng.normal(size=(k, k))
            a = 0.5 * (a + a.T)
            return a / max(1.0, np.max(np.abs(np.linalg.eigvalsh(a))))

        Q = np.eye(F) + spread * (0.5 * sym(F) + 1j * sym(F))
        b0 = spread * (rng.normal(size=F) + 1j * rng.normal(size=F))
        B1 = spread * (rng.normal(size=(F, S)) + 1j * rng.normal(size=(F, S)))
        c1 = spread * (rng.normal(size=S) + 1j * rng.normal(size=S))

    def params(s: np.ndarray) -> SliceParams:
        return Q, b0 + B1 @ s, complex(-0.5 * s @ s + c1 @ s)

    return GaussianSliceVector(signature, params, name)


# ═══════════════════════════════════════════════════════════════
# QUADRATIC DATA
# ═══════════════════════════════════════════════════════════════

@dataclass
class SliceData:
    """Numeric operator data on one slow slice."""
    J: np.ndarray
    t: np.ndarray
    g: np.ndarray
    P: np.ndarray
    p: np.ndarray
    p0: complex
    amp: complex


def compile_quadratic(signature: LegSignature, aux: Sequence[sympy.Symbol],
                      substitution: Sequence[sympy.Expr], phase: sympy.Expr,
                      amplitude: sympy.Expr, name: str = "") -> Callable[[np.ndarray], SliceData]:
    """
    Extract (J, t, g, P, p, p0, amp) as functions of the slow coordinates.

    Raises:
        UnsupportedOperatorError: nonaffine substitution, nonquadratic
            phase, or an amplitude depending on fast/auxiliary coordinates
    """
    fast, slow = signature.fast_symbols, signature.slow_symbols
    wv = tuple(fast) + tuple(aux)
    sub = [sympy.sympify(e) for e in substitution]
    phase = sympy.sympify(phase)
    amplitude = sympy.sympify(amplitude)
    fast_out = sympy.Matrix([sub[i] for i in signature.fast_index])
    slow_out = sympy.Matrix([sub[i] for i in signature.slow_index])
    if any(depends_on(e, wv) for e in slow_out):
        raise UnsupportedOperatorError(f"{name}: slow substitution depends on fast coordinates")
    J = fast_out.jacobian(wv)
    if J.free_symbols & set(wv):
        raise UnsupportedOperatorError(f"{name}: fast substitution is not affine")
    hess = sympy.hessian(phase, wv)
    if hess.free_symbols & set(wv):
        raise UnsupportedOperatorError(f"{name}: phase is not quadratic in the fast coordinates")
    if depends_on(amplitude, wv):
        raise UnsupportedOperatorError(f"{name}: amplitude depends on fast coordinates")
    zero = {v: 0 for v in wv}
    t = fast_out.xreplace(zero)
    grad = sympy.Matrix([phase]).jacobian(wv).xreplace(zero)
    p0 = phase.xreplace(zero)

    F, W, S = len(fast), len(wv), len(slow)
    exprs = list(J) + list(t) + list(slow_out) + list(hess / 2) + list(grad) + [p0, amplitude]
    compiled = compile_exprs(exprs, slow)
    sizes = [F * W, F, S, W * W, W, 1, 1]
    cuts = np.cumsum(sizes)[:-1]

    def at(s: np.ndarray) -> SliceData:
        flat = compiled(np.asarray(s, dtype=float)[None, :])[0]
        Jv, tv, gv, Pv, pv, p0v, ampv = np.split(flat, cuts)
        return SliceData(Jv.real.reshape(F, W), tv.real, gv.real, Pv.reshape(W, W), pv,
                         complex(p0v[0]), complex(ampv[0]))

    return at


def _safe_log(value: complex) -> complex:
    if value == 0:
        return complex(-np.inf)
    return complex(np.log(complex(value)))


# ═══════════════════════════════════════════════════════════════
# AFFINE ACTION
# ═══════════════════════════════════════════════════════════════

_AFFINE_DATA: "weakref.WeakKeyDictionary[AffinePhaseOp, Callable[[np.ndarray], SliceData]]" = weakref.WeakKeyDictionary()


def _affine_data(op: AffinePhaseOp) -> Callable[[np.ndarray], SliceData]:
    if op not in _AFFINE_DATA:
        _AFFINE_DATA[op] = compile_quadratic(op.signature, (), op.substitution, op.phase,
                                             op.amplitude, op.name)
    return _AFFINE_DATA[op]


def apply_affine(op: AffinePhaseOp, v: GaussianSliceVector) -> GaussianSliceVector:
    """Exact (Q, b, c) update for an affine operator."""
    if op.signature != v.signature:
        raise SignatureError(f"{op.name} acts on {op.signature}, vector lives on {v.signature}")
    data = _affine_data(op)

    def params(s: np.ndarray) -> SliceParams:
        d = data(s)
        Q, b, c = v.params(d.g)
        if op.antilinear:
            Q, b, c = np.conj(Q), np.conj(b), np.conj(c)
        M, t = d.J, d.t
        Q2 = M.T @ Q @ M + TWO_PI_I * d.P
        b2 = M.T @ (b - 2 * Q @ t) - TWO_PI_I * d.p
        c2 = c + b @ t - t @ Q @ t - TWO_PI_I * d.p0 + _safe_log(d.amp)
        return 0.5 * (Q2 + Q2.T), b2, complex(c2)

    return GaussianSliceVector(v.signature, params, f"{op.name}({v.name})")


# ═══════════════════════════════════════════════════════════════
# QUADRATIC FOURIER OPERATORS
# ═══════════════════════════════════════════════════════════════

def aux_symbols(letters: str, n: int) -> Tuple[sympy.Symbol, ...]:
    """Auxiliary integration variables t<letter>_<k>, n per letter."""
    return tuple(sympy.Symbol(f"t{a}_{k + 1}", real=True) for a in letters for k in range(n))


@dataclass(frozen=True, eq=False)
class QuadraticFourierOp:
    """
    (Kξ)(X) = weight(s)·amp(s)·∫ ē[phase(X, v)] ξ(S(X, v)) dv

    Attributes:
        signature: Legs and picture
        aux: Auxiliary variables v, integrated over ℝᵐ
        substitution: Affine in (fast, aux); slow part depends on slow only
        phase: Complex quadratic in (fast, aux); a complex phase carries
            Gaussian kernel factors since ē[iE/2π] = exp(E)
        amplitude: Slow-only expression
        weight: Optional slow-only numeric factor (e.g. compact bumps)
        name: Label
    """
    signature: LegSignature
    aux: Tuple[sympy.Symbol, ...]
    substitution: Tuple[sympy.Expr, ...]
    phase: sympy.Expr
    amplitude: sympy.Expr = sympy.Integer(1)
    weight: Optional[Callable[[np.ndarray], complex]] = None
    name: str = ""

    def __post_init__(self):
        sub = tuple(sympy.sympify(e) for e in self.substitution)
        if len(sub) != self.signature.dim:
            raise SignatureError(f"{self.name}: {len(sub)} substitution entries for {self.signature.dim} coordinates")
        object.__setattr__(self, "substitution", sub)
        object.__setattr__(self, "phase", sympy.sympify(self.phase))
        object.__setattr__(self, "amplitude", sympy.sympify(self.amplitude))

    @cached_property
    def data(self) -> Callable[[np.ndarray], SliceData]:
        return compile_quadratic(self.signature, self.aux, self.substitution, self.phase,
                                 self.amplitude, self.name)

    def embedded(self, which: Sequence[int], total: int) -> "QuadraticFourierOp":
        """Act on legs `which` (0-based) of a `total`-leg space."""
        src = self.signature
        dst = src.with_legs(total)
        mapping = leg_renaming(src, dst, which)
        sub = list(dst.symbols)
        pos = {s: k for k, s in enumerate(dst.symbols)}
        for sym, expr in zip(src.symbols, self.substitution):
            sub[pos[mapping[sym]]] = expr.xreplace(mapping)
        weight = self.weight
        if weight is not None:
            # the weight reads the slow vector of the original legs
            src_slow = [pos[mapping[s]] for s in src.slow_symbols]
            dst_slow = {k: j for j, k in enumerate(dst.slow_index)}
            take = np.array([dst_slow[k] for k in src_slow], dtype=int)
            inner = self.weight

            def weight(s, inner=inner, take=take):
                return inner(np.asarray(s)[take])

        label = "".join(str(i + 1) for i in which)
        return QuadraticFourierOp(dst, self.aux, tuple(sub), self.phase.xreplace(mapping),
                                  self.amplitude.xreplace(mapping), weight, f"{self.name}_{label}")


def apply_quadratic_fourier(op: QuadraticFourierOp, v: GaussianSliceVector) -> GaussianSliceVector:
    """
    Integrate the auxiliary variables out slice by slice.

    Raises (lazily, on evaluation):
        SingularSliceError: auxiliary form degenerate on the requested slice
    """
    if op.signature != v.signature:
        raise SignatureError(f"{op.name} acts on {op.signature}, vector lives on {v.signature}")
    F = op.signature.fast_index.size
    m = len(op.aux)

    def params(s: np.ndarray) -> SliceParams:
        d = op.data(s)
        amp = d.amp * (op.weight(s) if op.weight is not None else 1.0)
        Q, b, c = v.params(d.g)
        J, t = d.J, d.t
        H = J.T @ Q @ J + TWO_PI_I * d.P
        H = 0.5 * (H + H.T)
        ell = J.T @ (b - 2 * Q @ t) - TWO_PI_I * d.p
        c0 = c + b @ t - t @ Q @ t - TWO_PI_I * d.p0 + _safe_log(amp)
        if m == 0:
            return H, ell, complex(c0)
        Hzz, Hzv, Hvv = H[:F, :F], H[:F, F:], H[F:, F:]
        if np.linalg.cond(Hvv) > SINGULAR_CONDITION:
            raise SingularSliceError(f"{op.name}: degenerate auxiliary form at s={s}")
        sol_l = np.linalg.solve(Hvv, ell[F:])
        sol_h = np.linalg.solve(Hvv, Hzv.T)
        Q2 = Hzz - Hzv @ sol_h
        b2 = ell[:F] - Hzv @ sol_l
        eig = np.linalg.eigvals(Hvv)
        c2 = c0 + ell[F:] @ sol_l / 4 + 0.5 * m * np.log(np.pi) - 0.5 * np.sum(np.log(eig))
        return 0.5 * (Q2 + Q2.T), b2, complex(c2)

    return GaussianSliceVector(v.signature, params, f"{op.name}({v.name})")


def apply(op, v: GaussianSliceVector) -> GaussianSliceVector:
    """Dispatch on the operator kind."""
    if isinstance(op, AffinePhaseOp):
        return apply_affine(op, v)
    if isinstance(op, QuadraticFourierOp):
        return apply_quadratic_fourier(op, v)
    if hasattr(op, "apply_to"):
        return op.apply_to(v)
    raise UnsupportedOperatorError(f"cannot apply {type(op).__name__} to a Gaussian vector")


def apply_chain(ops: Sequence, v: GaussianSliceVector) -> GaussianSliceVector:
    """ops[0]∘ops[1]∘…∘ops[-1] applied to v (last operator acts first)."""
    for op in reversed(list(ops)):
        v = apply(op, v)
    return v
