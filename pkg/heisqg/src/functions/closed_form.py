"""
Closed Forms - Analytic test functions with compact slow support

PURPOSE:
    The test-function family used by every numerical check: finite sums of

        coef · P(z) · exp(-π (z-μ)ᵀA(z-μ) + 2πi k·z) · Π_j bump(s_j; c_j, ρ_j)

    in fast coordinates z (p, q, ... or x, y, ...) and slow coordinates s
    (r, w, ...). They can be evaluated anywhere, differentiated exactly,
    sampled onto a Grid, and (when P is constant) transformed in the fast
    variables in closed form.

THEORY:
    Gaussian Fourier pair with the e(t) = exp(2πi t) convention, for
    complex symmetric A with Re A ≻ 0 and ξ = X + k:

        ∫ exp(-π(z-μ)ᵀA(z-μ)) e(k·z) e(X·z) dz
            = e(μ·ξ) det(A)^{-1/2} exp(-π ξᵀA⁻¹ξ)

    det(A)^{-1/2} is the product of principal square roots of the
    eigenvalues, which all have positive real part.

    The bump exp(1 - 1/(1-u²)) is C-infinity with compact support, so
    these functions belong to the Schwartz-in-(p,q), compact-in-r class.

ARCHITECTURE ROLE:
    Inputs for functions/, hopf-suites and the classical-limit checks.
    TransformedClosedForm wraps a closed form with a coordinate map and a
    phase, which is how Ψ_λ(F) stays evaluable off any lattice.

DEBUGGING NOTES:
    - gradient() is exact; compare it with numeric_gradient() when adding
      a new term type.
    - vee()/wedge() refuse non-constant polynomial factors; sample the
      function and use the grid transforms instead.
"""

import json
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from functions.grid import Grid, SampledFunction
from utils.numerics import bump, bump_derivative

Poly = Dict[Tuple[int, ...], complex]

PICTURE_COORDS = {
    "pqr": ("p", "q", "r"),
    "xyr": ("x", "y", "r"),
    "pqrw2": ("p", "q", "r", "w", "p2", "q2", "r2", "w2"),
}
PICTURE_FAST = {
    "pqr": (0, 1),
    "xyr": (0, 1),
    "pqrw2": (0, 1, 4, 5),
}


def _slow_indices(picture: str) -> Tuple[int, ...]:
    fast = PICTURE_FAST[picture]
    return tuple(i for i in range(len(PICTURE_COORDS[picture])) if i not in fast)


# ═══════════════════════════════════════════════════════════════
# BASE CLASS
# ═══════════════════════════════════════════════════════════════

class ClosedFormFunction:
    """
    Function evaluable at arbitrary real points X of shape (..., D).

    Subclasses implement __call__; gradient() defaults to central
    differences.
    """

    picture: str = "pqr"

    @property
    def coords(self) -> Tuple[str, ...]:
        return PICTURE_COORDS[self.picture]

    @property
    def fast(self) -> Tuple[int, ...]:
        return PICTURE_FAST[self.picture]

    @property
    def slow(self) -> Tuple[int, ...]:
        return _slow_indices(self.picture)

    def __call__(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def numeric_gradient(self, X: np.ndarray, h: float = 1e-6) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        out = np.empty(X.shape, dtype=complex)
        for k in range(X.shape[-1]):
            dX = np.zeros(X.shape[-1])
            dX[k] = h
            out[..., k] = (self(X + dX) - self(X - dX)) / (2 * h)
        return out

    def gradient(self, X: np.ndarray) -> np.ndarray:
        return self.numeric_gradient(X)

    def sample(self, grid: Grid) -> SampledFunction:
        """Samples on the lattice (three-coordinate pictures only)."""
        A, B, R = grid.mesh()
        X = np.stack([A, B, R], axis=-1)
        return SampledFunction(grid, self(X), self.picture)


# ═══════════════════════════════════════════════════════════════
# GAUSSIAN FAMILY
# ═══════════════════════════════════════════════════════════════

@dataclass
class GaussianTerm:
    """One coef·P(z)·exp(-π(z-μ)ᵀA(z-μ) + 2πi k·z) summand."""
    coef: complex
    A: np.ndarray
    mu: np.ndarray
    k: np.ndarray
    poly: Poly = field(default_factory=dict)

    def __post_init__(self):
        self.A = np.asarray(self.A, dtype=complex)
        self.mu = np.asarray(self.mu, dtype=float)
        self.k = np.asarray(self.k, dtype=float)
        m = self.mu.size
        if not self.poly:
            self.poly = {(0,) * m: 1.0}
        if self.A.shape != (m, m) or self.k.size != m:
            raise ValueError("GaussianTerm: A, mu, k dimensions disagree")
        if not np.allclose(self.A, self.A.T):
            raise ValueError("GaussianTerm: A must be symmetric")
        if np.min(np.linalg.eigvalsh(self.A.real)) <= 0:
            raise ValueError("GaussianTerm: Re A must be positive definite")

    @property
    def constant_poly(self) -> bool:
        return all(sum(a) == 0 for a in self.poly)

    def poly_value(self, z: np.ndarray) -> np.ndarray:
        out = np.zeros(z.shape[:-1], dtype=complex)
        for alpha, c in self.poly.items():
            out = out + c * np.prod(z ** np.asarray(alpha), axis=-1)
        return out

    def poly_gradient(self, z: np.ndarray) -> np.ndarray:
        out = np.zeros(z.shape, dtype=complex)
        for alpha, c in self.poly.items():
            alpha = np.asarray(alpha)
            for i in range(alpha.size):
                if alpha[i] == 0:
                    continue
                lowered = alpha.copy()
                lowered[i] -= 1
                out[..., i] += c * alpha[i] * np.prod(z ** lowered, axis=-1)
        return out

    def exponent(self, z: np.ndarray) -> np.ndarray:
        d = z - self.mu
        quad = np.einsum("...i,ij,...j->...", d, self.A, d)
        return -np.pi * quad + 2j * np.pi * (z @ self.k)

    def sqrt_det_inv(self) -> complex:
        eig = np.linalg.eigvals(self.A)
        return complex(np.prod(1.0 / np.sqrt(eig.astype(complex))))

    def transformed(self, sign: int) -> "GaussianTerm":
        """
        Fast transform of this term: sign=+1 for ∫ e(X·z)·, -1 for ∫ ē(X·z)·.

        Result is again a GaussianTerm in X.
        """
        if not self.constant_poly:
            raise ValueError("closed-form transform needs a constant polynomial factor")
        c0 = sum(self.poly.values())
        Ainv = np.linalg.inv(self.A)
        Ainv = 0.5 * (Ainv + Ainv.T)
        phase = np.exp(2j * np.pi * float(self.mu @ self.k))
        coef = self.coef * c0 * self.sqrt_det_inv() * phase
        if sign > 0:
            return GaussianTerm(coef, Ainv, -self.k, self.mu)
        return GaussianTerm(coef, Ainv, self.k, -self.mu)


@dataclass
class SlowBump:
    """bump(s - center; radius) on one slow coordinate (index within the slow list)."""
    slot: int
    center: float
    radius: float


class GaussianClosedForm(ClosedFormFunction):
    """
    Σ terms × Π bumps.

    Attributes:
        terms: GaussianTerms in the fast coordinates
        bumps: SlowBump factors; every slow coordinate should carry one
        picture: Coordinate picture tag
    """

    def __init__(self, terms: List[GaussianTerm], bumps: List[SlowBump], picture: str = "pqr",
                 name: str = ""):
        self.terms = list(terms)
        self.bumps = list(bumps)
        self.picture = picture
        self.name = name
        m = len(self.fast)
        for t in self.terms:
            if t.mu.size != m:
                raise ValueError(f"term dimension {t.mu.size} does not match picture {picture}")

    # ───────────────────────────────────────────────────────────
    # evaluation
    # ───────────────────────────────────────────────────────────

    def _split(self, X: np.ndarray):
        X = np.asarray(X, dtype=float)
        return X[..., list(self.fast)], X[..., list(self.slow)]

    def slow_factor(self, s: np.ndarray) -> np.ndarray:
        out = np.ones(s.shape[:-1])
        for b in self.bumps:
            out = out * bump(s[..., b.slot], b.center, b.radius)
        return out

    def slow_factor_gradient(self, s: np.ndarray) -> np.ndarray:
        out = np.zeros(s.shape)
        for j in range(s.shape[-1]):
            g = np.ones(s.shape[:-1])
            for b in self.bumps:
                if b.slot == j:
                    g = g * bump_derivative(s[..., b.slot], b.center, b.radius)
                else:
                    g = g * bump(s[..., b.slot], b.center, b.radius)
            if any(b.slot == j for b in self.bumps):
                out[..., j] = g
        return out

    def fast_part(self, z: np.ndarray) -> np.ndarray:
        out = np.zeros(z.shape[:-1], dtype=complex)
        for t in self.terms:
            out = out + t.coef * t.poly_value(z) * np.exp(t.exponent(z))
        return out

    def __call__(self, X: np.ndarray) -> np.ndarray:
        z, s = self._split(X)
        return self.fast_part(z) * self.slow_factor(s)

    def gradient(self, X: np.ndarray) -> np.ndarray:
        """Exact gradient, shape (..., D)."""
        X = np.asarray(X, dtype=float)
        z, s = self._split(X)
        out = np.zeros(X.shape, dtype=complex)
        fast_grad = np.zeros(z.shape, dtype=complex)
        for t in self.terms:
            ex = t.coef * np.exp(t.exponent(z))
            dE = -2.0 * np.pi * np.einsum("ij,...j->...i", t.A, z - t.mu) + 2j * np.pi * t.k
            fast_grad += ex[..., None] * (t.poly_gradient(z) + t.poly_value(z)[..., None] * dE)
        sf = self.slow_factor(s)
        out[..., list(self.fast)] = fast_grad * sf[..., None]
        out[..., list(self.slow)] = self.fast_part(z)[..., None] * self.slow_factor_gradient(s)
        return out

    # ───────────────────────────────────────────────────────────
    # closed-form transforms
    # ───────────────────────────────────────────────────────────

    def vee(self) -> "GaussianClosedForm":
        """∫ e(X·z) φ(z, s) dz in closed form (pqr → xyr)."""
        return GaussianClosedForm([t.transformed(+1) for t in self.terms], self.bumps,
                                  _partner(self.picture), self.name + "^vee")

    def wedge(self) -> "GaussianClosedForm":
        """∫ ē(X·z) f(z, s) dz in closed form (xyr → pqr)."""
        return GaussianClosedForm([t.transformed(-1) for t in self.terms], self.bumps,
                                  _partner(self.picture), self.name + "^wedge")

    def fast_total(self) -> complex:
        """∫ of the fast part over all fast coordinates."""
        total = 0j
        for t in self.terms:
            v = t.transformed(+1)
            total += v.coef * np.exp(v.exponent(np.zeros(t.mu.size)))
        return complex(total)

    def fast_integral(self, s: np.ndarray) -> np.ndarray:
        """∫ φ(z, s) dz over all fast coordinates, at slow points s (..., S)."""
        return self.fast_total() * self.slow_factor(np.asarray(s, dtype=float))

    # ───────────────────────────────────────────────────────────
    # arithmetic and persistence
    # ───────────────────────────────────────────────────────────

    def scaled(self, c: complex) -> "GaussianClosedForm":
        terms = [GaussianTerm(c * t.coef, t.A, t.mu, t.k, dict(t.poly)) for t in self.terms]
        return GaussianClosedForm(terms, self.bumps, self.picture, self.name)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "picture": self.picture,
            "terms": [
                {
                    "coef": [float(np.real(t.coef)), float(np.imag(t.coef))],
                    "A_real": t.A.real.tolist(),
                    "A_imag": t.A.imag.tolist(),
                    "mu": t.mu.tolist(),
                    "k": t.k.tolist(),
                    "poly": [[list(a), [float(np.real(c)), float(np.imag(c))]] for a, c in t.poly.items()],
                }
                for t in self.terms
            ],
            "bumps": [{"slot": b.slot, "center": b.center, "radius": b.radius} for b in self.bumps],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "GaussianClosedForm":
        terms = []
        for t in doc["terms"]:
            poly = {tuple(a): complex(c[0], c[1]) for a, c in t["poly"]}
            A = np.asarray(t["A_real"]) + 1j * np.asarray(t["A_imag"])
            terms.append(GaussianTerm(complex(*t["coef"]), A, t["mu"], t["k"], poly))
        bumps = [SlowBump(b["slot"], b["center"], b["radius"]) for b in doc["bumps"]]
        return cls(terms, bumps, doc["picture"], doc.get("name", ""))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _partner(picture: str) -> str:
    return {"pqr": "xyr", "xyr": "pqr"}.get(picture, picture)


# ═══════════════════════════════════════════════════════════════
# TRANSFORMED FORMS
# ═══════════════════════════════════════════════════════════════

class TransformedClosedForm(ClosedFormFunction):
    """
    X ↦ prefactor(X) · base(substitution(X)).

    Used for point-transformation-plus-phase maps such as Ψ_λ.
    """

    def __init__(self, base: ClosedFormFunction, substitution: Callable[[np.ndarray], np.ndarray],
                 prefactor: Optional[Callable[[np.ndarray], np.ndarray]] = None, name: str = ""):
        self.base = base
        self.picture = base.picture
        self.substitution = substitution
        self.prefactor = prefactor
        self.name = name

    def __call__(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        out = self.base(self.substitution(X))
        if self.prefactor is not None:
            out = out * self.prefactor(X)
        return out


class LinearCombination(ClosedFormFunction):
    """Σ c_i f_i over closed forms sharing a picture."""

    def __init__(self, parts: Sequence[Tuple[complex, ClosedFormFunction]]):
        self.parts = list(parts)
        self.picture = self.parts[0][1].picture

    def __call__(self, X: np.ndarray) -> np.ndarray:
        return sum(c * f(X) for c, f in self.parts)

    def gradient(self, X: np.ndarray) -> np.ndarray:
        return sum(c * f.gradient(X) for c, f in self.parts)


# ═══════════════════════════════════════════════════════════════
# FACTORIES
# ═══════════════════════════════════════════════════════════════

def gaussian_test_function(width: float = 1.0, center=(0.0, 0.0), wave=(0.0, 0.0),
                           bump_center: float = 0.0, bump_radius: float = 0.4,
                           coef: complex = 1.0, A: np.ndarray = None,
                           poly: Poly = None, name: str = "") -> GaussianClosedForm:
    """
    exp(-π|z-μ|²/width²) e(k·z) bump(r) in the (p, q, r) picture.

    Args:
        width: Gaussian width in (p, q); A = I/width² unless A is given
        center: μ
        wave: k (plane-wave frequency)
        bump_center, bump_radius: r-support
    """
    if A is None:
        A = np.eye(2) / width ** 2
    term = GaussianTerm(coef, A, center, wave, dict(poly) if poly else {})
    return GaussianClosedForm([term], [SlowBump(0, bump_center, bump_radius)], "pqr", name)


def zero_at_origin_function(shift=(0.6, 0.3), width: float = 1.0, bump_radius: float = 0.4) -> GaussianClosedForm:
    """g(z - a) - g(z + a): vanishes at the origin of G."""
    A = np.eye(2) / width ** 2
    a = np.asarray(shift, dtype=float)
    terms = [GaussianTerm(1.0, A, a, [0, 0]), GaussianTerm(-1.0, A, -a, [0, 0])]
    return GaussianClosedForm(terms, [SlowBump(0, 0.0, bump_radius)], "pqr", "zero_at_origin")


def two_leg_test_function(widths=(1.0, 1.0, 1.0, 1.0), center=(0.1, -0.2, 0.15, 0.05),
                          coupling: float = 0.2, bump_radius: float = 0.3,
                          name: str = "F") -> GaussianClosedForm:
    """
    Gaussian on the two-leg extended picture (p,q,r,w,p',q',r',w').

    `coupling` adds an off-diagonal p-q' entry so the function does not
    factor between legs.
    """
    A = np.diag(1.0 / np.asarray(widths, dtype=float) ** 2)
    A[0, 3] = A[3, 0] = coupling
    term = GaussianTerm(1.0, A, center, [0.0, 0.0, 0.0, 0.0])
    bumps = [SlowBump(j, 0.0, bump_radius) for j in range(4)]
    return GaussianClosedForm([term], bumps, "pqrw2", name)


class SlowProfile(ClosedFormFunction):
    """
    Function of the slow coordinate only: coef · bump(r; center, radius).

    Constant in (p, q). Such functions commute under the deformed product
    and have zero Poisson bracket with each other.
    """

    def __init__(self, coef: complex = 1.0, center: float = 0.0, radius: float = 0.4,
                 picture: str = "pqr"):
        self.coef = coef
        self.center = center
        self.radius = radius
        self.picture = picture

    def __call__(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return self.coef * bump(X[..., self.slow[0]], self.center, self.radius).astype(complex)

    def gradient(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        out = np.zeros(X.shape, dtype=complex)
        out[..., self.slow[0]] = self.coef * bump_derivative(X[..., self.slow[0]], self.center, self.radius)
        return out
