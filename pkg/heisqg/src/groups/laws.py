"""
Group Laws - Heisenberg group, its dual group, and their extensions

PURPOSE:
    Implements the pairing β, the function η_λ, and the four group laws
    (H, G, H̃, G̃) in the coordinates used throughout the library. Every
    other package consumes these; none of them re-derive a group law.

THEORY:
    Heisenberg group H = ℝ^{2n+1}, coordinates (x, y, z):

        (x,y,z)(x',y',z') = (x+x', y+y', z+z'+β(x,y'))

    Dual group G = ℝ^{2n+1}, coordinates (p, q, r):

        (p,q,r)(p',q',r') = (e^{λr'}p+p', e^{λr'}q+q', r+r')

    Extended groups add one scalar each:

        H̃: (x+e^{w}x', y+e^{-w}y', z+z'+e^{-w}β(x,y'), w+w')
        G̃: (e^{λr'}p+p', e^{λr'}q+q', r+r', s+s')

    The cocycle function η_λ(r) = (e^{2λr}-1)/(2λ), η₀(r) = r, satisfies

        η_λ(r+r') = e^{2λr'} η_λ(r) + η_λ(r')

    which is what makes the twisted convolution associative and is used
    all over the operator engine.

    The coordinates are the global chart ℝ^{2n+1} ≅ group,
    not exponential coordinates; no BCH series appears anywhere.

ARCHITECTURE ROLE:
    Bottom layer. lie/ uses eta for the Poisson bracket, functions/ uses
    eta for cocycles and g_mul for the function picture of Δ, operators/
    mirrors eta symbolically.

DEBUGGING NOTES:
    - eta uses expm1 so η_λ(r) is accurate for tiny λr; a naive
      (exp(2λr)-1)/(2λ) loses digits below λr ≈ 1e-8.
    - Inverses are checked against the laws in tests, never assumed.

FUTURE EXTENSIONS:
    - Batched (array-of-elements) variants if the 1000-triple checks ever
      become a bottleneck.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from utils.errors import DimensionError


# ═══════════════════════════════════════════════════════════════
# PAIRING AND COCYCLE FUNCTION
# ═══════════════════════════════════════════════════════════════

def _vec(v) -> np.ndarray:
    return np.atleast_1d(np.asarray(v, dtype=float))


def beta(x, y) -> float:
    """
    The inner product β(x, y) = Σ x_i y_i on ℝⁿ.

    Raises:
        DimensionError: if the vectors have different lengths
    """
    x = _vec(x)
    y = _vec(y)
    if x.shape != y.shape:
        raise DimensionError(f"beta: length mismatch {x.shape} vs {y.shape}")
    return float(np.dot(x, y))


def eta(lam: float, r):
    """
    η_λ(r) = (e^{2λr} - 1)/(2λ), with η₀(r) = r.

    Works elementwise on arrays of r.

    Example:
        >>> eta(0.0, 5.0)
        5.0
        >>> round(eta(0.5, 1.0), 9)
        1.718281828
    """
    r = np.asarray(r, dtype=float)
    if lam == 0.0:
        out = r.copy()
    else:
        out = np.expm1(2.0 * lam * r) / (2.0 * lam)
    return float(out) if out.ndim == 0 else out


def eta_prime(lam: float, r):
    """dη_λ/dr = e^{2λr}."""
    out = np.exp(2.0 * lam * np.asarray(r, dtype=float))
    return float(out) if out.ndim == 0 else out


def eta_identity_defect(lam: float, r: float, r_prime: float) -> float:
    """
    |e^{-2λr'}η_λ(r+r') - e^{-2λr'}η_λ(r') - η_λ(r)|.

    Zero up to round-off for every (λ, r, r'); the λ = 0 branch degenerates
    to (r + r') - r' - r.
    """
    k = np.exp(-2.0 * lam * r_prime)
    lhs = k * eta(lam, r + r_prime) - k * eta(lam, r_prime)
    return float(abs(lhs - eta(lam, r)))


def eta_identity_scale(lam: float, r: float, r_prime: float) -> float:
    """Sum of operand magnitudes in eta_identity_defect, the unit for ulp budgets."""
    k = np.exp(-2.0 * lam * r_prime)
    return float(abs(k * eta(lam, r + r_prime)) + abs(k * eta(lam, r_prime)) + abs(eta(lam, r)))


def eta_limit_bound_holds(lam: float, r, constant: float = 1.0) -> bool:
    """
    Check |η_λ(r) - r| ≤ C|λ| r² e^{2|λ||r|} on samples.

    The Taylor tail of η_λ gives the bound with C = 1.
    """
    r = np.asarray(r, dtype=float)
    lhs = np.abs(eta(lam, r) - r)
    rhs = constant * abs(lam) * r * r * np.exp(2.0 * abs(lam) * np.abs(r))
    # round-off floor for λr ≈ 0
    floor = 4.0 * np.finfo(float).eps * (np.abs(r) + 1.0)
    return bool(np.all(lhs <= rhs + floor))


# ═══════════════════════════════════════════════════════════════
# GROUP ELEMENTS
# ═══════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class HeisElement:
    """Element (x, y, z) of the Heisenberg group H."""
    x: np.ndarray
    y: np.ndarray
    z: float

    def as_array(self) -> np.ndarray:
        return np.concatenate([_vec(self.x), _vec(self.y), [self.z]])

    @property
    def n(self) -> int:
        return _vec(self.x).size


@dataclass(frozen=True)
class GElement:
    """Element (p, q, r) of the dual group G."""
    p: np.ndarray
    q: np.ndarray
    r: float

    def as_array(self) -> np.ndarray:
        return np.concatenate([_vec(self.p), _vec(self.q), [self.r]])

    @property
    def n(self) -> int:
        return _vec(self.p).size


@dataclass(frozen=True)
class ExtHeisElement:
    """Element (x, y, z, w) of the extended Heisenberg group H̃."""
    x: np.ndarray
    y: np.ndarray
    z: float
    w: float

    def as_array(self) -> np.ndarray:
        return np.concatenate([_vec(self.x), _vec(self.y), [self.z, self.w]])

    @property
    def n(self) -> int:
        return _vec(self.x).size


@dataclass(frozen=True)
class ExtGElement:
    """Element (p, q, r, s) of the extended dual group G̃."""
    p: np.ndarray
    q: np.ndarray
    r: float
    s: float

    def as_array(self) -> np.ndarray:
        return np.concatenate([_vec(self.p), _vec(self.q), [self.r, self.s]])

    @property
    def n(self) -> int:
        return _vec(self.p).size


def _check_same_n(a, b, what: str):
    if a.n != b.n:
        raise DimensionError(f"{what}: dimension mismatch n={a.n} vs n={b.n}")


# ═══════════════════════════════════════════════════════════════
# HEISENBERG GROUP H AND ITS EXTENSION
# ═══════════════════════════════════════════════════════════════

def heis_identity(n: int) -> HeisElement:
    return HeisElement(np.zeros(n), np.zeros(n), 0.0)


def heis_mul(a: HeisElement, b: HeisElement) -> HeisElement:
    """(x+x', y+y', z+z'+β(x,y'))."""
    _check_same_n(a, b, "heis_mul")
    return HeisElement(
        _vec(a.x) + _vec(b.x),
        _vec(a.y) + _vec(b.y),
        float(a.z + b.z + beta(a.x, b.y)),
    )


def heis_inv(a: HeisElement) -> HeisElement:
    """(-x, -y, -z+β(x,y))."""
    return HeisElement(-_vec(a.x), -_vec(a.y), float(-a.z + beta(a.x, a.y)))


def ext_heis_identity(n: int) -> ExtHeisElement:
    return ExtHeisElement(np.zeros(n), np.zeros(n), 0.0, 0.0)


def ext_heis_mul(a: ExtHeisElement, b: ExtHeisElement) -> ExtHeisElement:
    """(x+e^{w}x', y+e^{-w}y', z+z'+e^{-w}β(x,y'), w+w')."""
    _check_same_n(a, b, "ext_heis_mul")
    ew = np.exp(a.w)
    return ExtHeisElement(
        _vec(a.x) + ew * _vec(b.x),
        _vec(a.y) + _vec(b.y) / ew,
        float(a.z + b.z + beta(a.x, b.y) / ew),
        float(a.w + b.w),
    )


def ext_heis_inv(a: ExtHeisElement) -> ExtHeisElement:
    """(-e^{-w}x, -e^{w}y, -z+β(x,y), -w)."""
    ew = np.exp(a.w)
    return ExtHeisElement(
        -_vec(a.x) / ew,
        -_vec(a.y) * ew,
        float(-a.z + beta(a.x, a.y)),
        float(-a.w),
    )


# ═══════════════════════════════════════════════════════════════
# DUAL GROUP G AND ITS EXTENSION
# ═══════════════════════════════════════════════════════════════

def g_identity(n: int) -> GElement:
    return GElement(np.zeros(n), np.zeros(n), 0.0)


def g_mul(a: GElement, b: GElement, lam: float) -> GElement:
    """(e^{λr'}p+p', e^{λr'}q+q', r+r')."""
    _check_same_n(a, b, "g_mul")
    k = np.exp(lam * b.r)
    return GElement(
        k * _vec(a.p) + _vec(b.p),
        k * _vec(a.q) + _vec(b.q),
        float(a.r + b.r),
    )


def g_inv(a: GElement, lam: float) -> GElement:
    """(-e^{-λr}p, -e^{-λr}q, -r)."""
    k = np.exp(-lam * a.r)
    return GElement(-k * _vec(a.p), -k * _vec(a.q), float(-a.r))


def ext_g_identity(n: int) -> ExtGElement:
    return ExtGElement(np.zeros(n), np.zeros(n), 0.0, 0.0)


def ext_g_mul(a: ExtGElement, b: ExtGElement, lam: float) -> ExtGElement:
    """(e^{λr'}p+p', e^{λr'}q+q', r+r', s+s')."""
    _check_same_n(a, b, "ext_g_mul")
    k = np.exp(lam * b.r)
    return ExtGElement(
        k * _vec(a.p) + _vec(b.p),
        k * _vec(a.q) + _vec(b.q),
        float(a.r + b.r),
        float(a.s + b.s),
    )


def ext_g_inv(a: ExtGElement, lam: float) -> ExtGElement:
    k = np.exp(-lam * a.r)
    return ExtGElement(-k * _vec(a.p), -k * _vec(a.q), float(-a.r), float(-a.s))


# ═══════════════════════════════════════════════════════════════
# RANDOM ELEMENTS AND LAW CHECKS
# ═══════════════════════════════════════════════════════════════

def random_heis(rng: np.random.Generator, n: int, scale: float = 2.0) -> HeisElement:
    v = rng.uniform(-scale, scale, 2 * n + 1)
    return HeisElement(v[:n], v[n:2 * n], float(v[-1]))


def random_g(rng: np.random.Generator, n: int, scale: float = 2.0) -> GElement:
    v = rng.uniform(-scale, scale, 2 * n + 1)
    return GElement(v[:n], v[n:2 * n], float(v[-1]))


def random_ext_heis(rng: np.random.Generator, n: int, scale: float = 2.0) -> ExtHeisElement:
    v = rng.uniform(-scale, scale, 2 * n + 2)
    return ExtHeisElement(v[:n], v[n:2 * n], float(v[-2]), float(v[-1]))


def random_ext_g(rng: np.random.Generator, n: int, scale: float = 2.0) -> ExtGElement:
    v = rng.uniform(-scale, scale, 2 * n + 2)
    return ExtGElement(v[:n], v[n:2 * n], float(v[-2]), float(v[-1]))


def associativity_defect(mul: Callable, a, b, c) -> float:
    """Relative defect |(ab)c - a(bc)| / max(|(ab)c|, 1)."""
    left = mul(mul(a, b), c).as_array()
    right = mul(a, mul(b, c)).as_array()
    return float(np.max(np.abs(left - right)) / max(np.max(np.abs(left)), 1.0))


def inverse_defect(mul: Callable, inv: Callable, identity, a) -> float:
    """max of |a·a⁻¹ - e| and |a⁻¹·a - e|."""
    e_arr = identity.as_array()
    right = mul(a, inv(a)).as_array()
    left = mul(inv(a), a).as_array()
    return float(max(np.max(np.abs(right - e_arr)), np.max(np.abs(left - e_arr))))
