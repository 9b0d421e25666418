"""
Coordinate Expressions - Leg signatures and the sympy expression layer

PURPOSE:
    Every operator in operators/ is written as sympy expressions over named
    leg coordinates. This module owns the naming scheme, the small set of
    expression constructors the formulas need (η_λ, β, exponentials of
    slow coordinates), compilation to numpy, and JSON serialization.

THEORY:
    A leg carries n-vectors of two "fast" coordinates and one or two
    scalar "slow" coordinates. The picture string names them:

        "xyr"   Hilbert space ℋ            x, y ∈ ℝⁿ, r
        "xyrw"  extended Hilbert space ℋ̃   x, y ∈ ℝⁿ, r, w
        "pqrs"  functions on G̃             p, q ∈ ℝⁿ, r, s
        "pqrw"  mixed picture              p, q ∈ ℝⁿ, r, w

    Symbols are named <letter><leg>, with a _<k> suffix when n > 1, and
    are declared real so that conjugate(exp(r)) simplifies to exp(r).

    CoordExpr is a plain sympy.Expr: constants, coordinates, sums,
    products, exp of slow combinations, η_λ and β are all built from
    sympy primitives and stay closed under substitution (xreplace).

ARCHITECTURE ROLE:
    Imported by affine.py, gaussian.py, builders.py and rmatrix.py.

DEBUGGING NOTES:
    - compile_exprs() broadcasts constant expressions to the batch size;
      lambdify alone would return a bare scalar for them.
    - Round-trip JSON uses sympy.srepr, which keeps the real=True
      assumption on every symbol.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
import sympy

from utils.errors import SignatureError

CoordExpr = sympy.Expr

PICTURES = ("xyr", "xyrw", "pqrs", "pqrw")


# ═══════════════════════════════════════════════════════════════
# LEG SIGNATURES
# ═══════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class Leg:
    """Symbols of one leg, addressed by role."""
    fast1: Tuple[sympy.Symbol, ...]
    fast2: Tuple[sympy.Symbol, ...]
    slow: Tuple[sympy.Symbol, ...]

    @property
    def x(self):
        return self.fast1

    @property
    def y(self):
        return self.fast2

    p = x
    q = y

    @property
    def r(self) -> sympy.Symbol:
        return self.slow[0]

    @property
    def w(self) -> sympy.Symbol:
        if len(self.slow) < 2:
            raise SignatureError("leg has no second slow coordinate")
        return self.slow[1]

    s = w

    @property
    def all(self) -> Tuple[sympy.Symbol, ...]:
        return self.fast1 + self.fast2 + self.slow


@lru_cache(maxsize=None)
def _leg_symbols(n: int, leg: int, picture: str) -> Leg:
    def name(letter, k):
        return f"{letter}{leg}" if n == 1 else f"{letter}{leg}_{k + 1}"

    f1 = tuple(sympy.Symbol(name(picture[0], k), real=True) for k in range(n))
    f2 = tuple(sympy.Symbol(name(picture[1], k), real=True) for k in range(n))
    slow = tuple(sympy.Symbol(f"{letter}{leg}", real=True) for letter in picture[2:])
    return Leg(f1, f2, slow)


@dataclass(frozen=True)
class LegSignature:
    """
    Number of legs, dimension n and coordinate picture of an operator.

    Attributes:
        n: Number of (x_i, y_i) pairs per leg
        legs: Number of tensor legs
        picture: One of PICTURES
    """
    n: int = 1
    legs: int = 1
    picture: str = "xyr"

    def __post_init__(self):
        if self.picture not in PICTURES:
            raise SignatureError(f"unknown picture {self.picture!r}")
        if self.n < 1 or self.legs < 1:
            raise SignatureError(f"invalid signature n={self.n}, legs={self.legs}")

    @property
    def extended(self) -> bool:
        return len(self.picture) == 4

    @property
    def per_leg(self) -> int:
        return 2 * self.n + len(self.picture) - 2

    @property
    def dim(self) -> int:
        return self.legs * self.per_leg

    def leg(self, i: int) -> Leg:
        """Symbols of leg i (0-based)."""
        if not 0 <= i < self.legs:
            raise SignatureError(f"leg {i} out of range for {self.legs} legs")
        return _leg_symbols(self.n, i + 1, self.picture)

    @property
    def symbols(self) -> Tuple[sympy.Symbol, ...]:
        out: Tuple[sympy.Symbol, ...] = ()
        for i in range(self.legs):
            out += self.leg(i).all
        return out

    @property
    def fast_symbols(self) -> Tuple[sympy.Symbol, ...]:
        out: Tuple[sympy.Symbol, ...] = ()
        for i in range(self.legs):
            L = self.leg(i)
            out += L.fast1 + L.fast2
        return out

    @property
    def slow_symbols(self) -> Tuple[sympy.Symbol, ...]:
        out: Tuple[sympy.Symbol, ...] = ()
        for i in range(self.legs):
            out += self.leg(i).slow
        return out

    @property
    def fast_index(self) -> np.ndarray:
        pos = {s: k for k, s in enumerate(self.symbols)}
        return np.array([pos[s] for s in self.fast_symbols], dtype=int)

    @property
    def slow_index(self) -> np.ndarray:
        pos = {s: k for k, s in enumerate(self.symbols)}
        return np.array([pos[s] for s in self.slow_symbols], dtype=int)

    def with_legs(self, legs: int) -> "LegSignature":
        return LegSignature(self.n, legs, self.picture)

    def random_points(self, rng: np.random.Generator, count: int,
                      fast_scale: float = 2.0, slow_scale: float = 1.0) -> np.ndarray:
        """Fast coordinates ~ U[-fast_scale, fast_scale], slow ~ U[-slow_scale, slow_scale]."""
        X = np.empty((count, self.dim))
        X[:, self.fast_index] = rng.uniform(-fast_scale, fast_scale, (count, self.fast_index.size))
        X[:, self.slow_index] = rng.uniform(-slow_scale, slow_scale, (count, self.slow_index.size))
        return X

    def to_dict(self) -> dict:
        return {"n": self.n, "legs": self.legs, "picture": self.picture}


def leg_renaming(src: LegSignature, dst: LegSignature, which: Sequence[int]) -> Dict[sympy.Symbol, sympy.Symbol]:
    """
    Symbol map sending leg j of `src` to leg which[j] of `dst`.

    Raises:
        SignatureError: repeated or out-of-range indices, picture/n mismatch
    """
    which = tuple(int(i) for i in which)
    if src.n != dst.n or src.picture != dst.picture:
        raise SignatureError("embedding needs the same n and picture")
    if len(which) != src.legs:
        raise SignatureError(f"need {src.legs} target legs, got {len(which)}")
    if len(set(which)) != len(which):
        raise SignatureError(f"target legs must be distinct, got {which}")
    if any(i < 0 or i >= dst.legs for i in which):
        raise SignatureError(f"target legs {which} out of range for {dst.legs} legs")
    mapping = {}
    for j, i in enumerate(which):
        for a, b in zip(src.leg(j).all, dst.leg(i).all):
            mapping[a] = b
    return mapping


# ═══════════════════════════════════════════════════════════════
# EXPRESSION CONSTRUCTORS
# ═══════════════════════════════════════════════════════════════

def num(value) -> sympy.Expr:
    """Python/numpy number as a sympy constant (complex allowed)."""
    value = complex(value)
    if value.imag == 0.0:
        return sympy.Float(value.real)
    return sympy.Float(value.real) + sympy.I * sympy.Float(value.imag)


def eta_expr(lam: float, s: sympy.Expr) -> sympy.Expr:
    """η_λ(s) = (e^{2λs} - 1)/(2λ), or s when λ = 0."""
    if lam == 0.0:
        return s
    lam = sympy.Float(lam)
    return (sympy.exp(2 * lam * s) - 1) / (2 * lam)


def beta_expr(u: Sequence, v: Sequence) -> sympy.Expr:
    """β(u, v) = Σ u_i v_i."""
    if len(u) != len(v):
        raise SignatureError(f"beta of lengths {len(u)} and {len(v)}")
    return sympy.Add(*[sympy.sympify(a) * sympy.sympify(b) for a, b in zip(u, v)])


def scale(c, v: Sequence) -> Tuple[sympy.Expr, ...]:
    return tuple(c * vi for vi in v)


def vsub(u: Sequence, v: Sequence) -> Tuple[sympy.Expr, ...]:
    return tuple(a - b for a, b in zip(u, v))


def vadd(u: Sequence, v: Sequence) -> Tuple[sympy.Expr, ...]:
    return tuple(a + b for a, b in zip(u, v))


def as_vector(value, n: int) -> Tuple[sympy.Expr, ...]:
    """Scalar or length-n sequence of numbers as a tuple of sympy constants."""
    arr = np.broadcast_to(np.asarray(value, dtype=float), (n,))
    return tuple(num(a) for a in arr)


# ═══════════════════════════════════════════════════════════════
# COMPILATION
# ═══════════════════════════════════════════════════════════════

def compile_exprs(exprs: Sequence[sympy.Expr], symbols: Sequence[sympy.Symbol]) -> Callable[[np.ndarray], np.ndarray]:
    """
    Vectorized evaluator: points (N, len(symbols)) -> values (N, len(exprs)).

    Output is complex; constant expressions are broadcast.
    """
    exprs = [sympy.sympify(e) for e in exprs]
    fns = [sympy.lambdify(symbols, e, modules="numpy") for e in exprs]

    def evaluate(X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        cols = [X[:, k] for k in range(X.shape[1])]
        out = np.empty((X.shape[0], len(fns)), dtype=complex)
        for j, f in enumerate(fns):
            out[:, j] = np.broadcast_to(f(*cols), (X.shape[0],))
        return out

    return evaluate


def compile_matrix(matrix: sympy.Matrix, symbols: Sequence[sympy.Symbol]) -> Callable[[np.ndarray], np.ndarray]:
    """Evaluator of a sympy Matrix at one point: (len(symbols),) -> complex array."""
    shape = matrix.shape
    flat = compile_exprs(list(matrix), symbols)

    def evaluate(x: np.ndarray) -> np.ndarray:
        return flat(np.asarray(x, dtype=float)[None, :])[0].reshape(shape)

    return evaluate


def depends_on(expr, symbols: Sequence[sympy.Symbol]) -> bool:
    return bool(sympy.sympify(expr).free_symbols & set(symbols))


# ═══════════════════════════════════════════════════════════════
# SERIALIZATION
# ═══════════════════════════════════════════════════════════════

def expr_to_json(expr) -> str:
    return sympy.srepr(sympy.sympify(expr))


def expr_from_json(text: str) -> sympy.Expr:
    return sympy.sympify(text)


def exprs_to_json(exprs: Sequence) -> List[str]:
    return [expr_to_json(e) for e in exprs]
