"""
Poisson Bracket - The Poisson-Lie structure on the dual group G

PURPOSE:
    Evaluates the Poisson bracket of two smooth functionals on G at a
    point, plus three sanity checks on it: antisymmetry (by construction),
    the Jacobi identity, and multiplicativity under the group law.

THEORY:
    Writing dφ(p,q,r) = (x, y, z) (gradients in p, q, r):

        {φ, ψ}(p,q,r) = η_λ(r) (β(x, y') - β(x', y))

    with (x', y', z') = dψ. At λ = 0 this is r(β(x,y') - β(x',y)), the
    bracket determined by the linear cocycle ω₀.

    Multiplicativity (Poisson-Lie property): for Φ = φ∘m, Ψ = ψ∘m on G×G
    with the product bracket,

        {Φ, Ψ}(g, h) = {φ(·h), ψ(·h)}(g) + {φ(g·), ψ(g·)}(h) = {φ, ψ}(gh)

    which follows from η_λ(r+r') = e^{2λr'}η_λ(r) + η_λ(r').

ARCHITECTURE ROLE:
    Consumed by functions/limits.py for the semiclassical defect and by
    the 'lie' suite.

DEBUGGING NOTES:
    - Finite differences use central steps of 1e-5; a nested bracket
      differentiates with the outer step 1e-4 so the two noise floors
      stay separated.
    - Supply `grad` on a SmoothFunctional to skip finite differences.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from groups.laws import GElement, beta, eta, g_mul
from groups.params import ModelParams

FD_STEP = 1e-5
OUTER_FD_STEP = 1e-4


@dataclass(frozen=True)
class PoissonPoint:
    """Point (p, q, r) of G, stored flat as [p..., q..., r]."""
    coords: np.ndarray

    @classmethod
    def from_g(cls, g: GElement) -> "PoissonPoint":
        return cls(g.as_array())

    @property
    def n(self) -> int:
        return (self.coords.size - 1) // 2

    @property
    def r(self) -> float:
        return float(self.coords[-1])

    def to_g(self) -> GElement:
        n = self.n
        return GElement(self.coords[:n], self.coords[n:2 * n], float(self.coords[-1]))


@dataclass
class SmoothFunctional:
    """
    Smooth function on G with an optional analytic gradient.

    Attributes:
        func: coords (flat array) → float
        grad: coords → gradient array of the same length, or None
        step: central-difference step used when grad is None
    """
    func: Callable[[np.ndarray], float]
    grad: Optional[Callable[[np.ndarray], np.ndarray]] = None
    step: float = FD_STEP
    name: str = ""

    def __call__(self, coords: np.ndarray) -> float:
        return self.func(np.asarray(coords, dtype=float))

    def gradient(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        if self.grad is not None:
            return np.asarray(self.grad(coords), dtype=float)
        out = np.empty_like(coords)
        for k in range(coords.size):
            e_k = np.zeros_like(coords)
            e_k[k] = self.step
            out[k] = (self.func(coords + e_k) - self.func(coords - e_k)) / (2.0 * self.step)
        return out


def coordinate(index: int, n: int = 1, name: str = "") -> SmoothFunctional:
    """Coordinate function with its exact gradient (0..n-1 → p, n..2n-1 → q, 2n → r)."""
    def grad(c):
        g = np.zeros(2 * n + 1)
        g[index] = 1.0
        return g
    return SmoothFunctional(lambda c: float(c[index]), grad, name=name or f"coord{index}")


def poisson_bracket(phi: SmoothFunctional, psi: SmoothFunctional, pt: PoissonPoint,
                    params: ModelParams) -> float:
    """{φ, ψ}(pt) = η_λ(r)(β(x, y') - β(x', y))."""
    n = pt.n
    dphi = phi.gradient(pt.coords)
    dpsi = psi.gradient(pt.coords)
    x, y = dphi[:n], dphi[n:2 * n]
    xp, yp = dpsi[:n], dpsi[n:2 * n]
    return eta(params.lam, pt.r) * (beta(x, yp) - beta(xp, y))


def bracket_functional(phi: SmoothFunctional, psi: SmoothFunctional, params: ModelParams,
                       step: float = OUTER_FD_STEP) -> SmoothFunctional:
    """{φ, ψ} as a functional, differentiated with the outer step."""
    return SmoothFunctional(
        lambda c: poisson_bracket(phi, psi, PoissonPoint(c), params),
        step=step,
        name=f"{{{phi.name},{psi.name}}}",
    )


def jacobi_defect(phi: SmoothFunctional, psi: SmoothFunctional, chi: SmoothFunctional,
                  pt: PoissonPoint, params: ModelParams) -> float:
    """|{{φ,ψ},χ} + {{ψ,χ},φ} + {{χ,φ},ψ}| at pt."""
    total = 0.0
    for a, b, c in ((phi, psi, chi), (psi, chi, phi), (chi, phi, psi)):
        total += poisson_bracket(bracket_functional(a, b, params), c, pt, params)
    return abs(total)


def poisson_lie_defect(phi: SmoothFunctional, psi: SmoothFunctional, g: GElement, h: GElement,
                       params: ModelParams) -> float:
    """|{φ∘m, ψ∘m}_{G×G}(g, h) - {φ, ψ}(gh)|."""
    lam = params.lam

    def right_translate(f: SmoothFunctional) -> SmoothFunctional:
        return SmoothFunctional(lambda c: f(g_mul(PoissonPoint(c).to_g(), h, lam).as_array()))

    def left_translate(f: SmoothFunctional) -> SmoothFunctional:
        return SmoothFunctional(lambda c: f(g_mul(g, PoissonPoint(c).to_g(), lam).as_array()))

    lhs = (
        poisson_bracket(right_translate(phi), right_translate(psi), PoissonPoint.from_g(g), params)
        + poisson_bracket(left_translate(phi), left_translate(psi), PoissonPoint.from_g(h), params)
    )
    rhs = poisson_bracket(phi, psi, PoissonPoint.from_g(g_mul(g, h, lam)), params)
    return abs(lhs - rhs)
