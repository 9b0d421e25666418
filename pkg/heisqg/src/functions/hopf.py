"""
Hopf Maps - Haar functional, counit, dagger and antipode on grids

PURPOSE:
    The function-picture structure maps of the quantum group:

        h(φ)  = ∫ φ(p, q, r) dp dq dr
        ε(φ)  = φ(0, 0, 0) = ∫ φ^∨(x, y, 0) dx dy
        φ†    = conj φ(-e^{-λr} p, -e^{-λr} q, -r)
        κ(φ)  = (φ*)† = (φ†)*

THEORY:
    φ† leaves every fixed lattice: the fast coordinates are rescaled by
    e^{-λr}. Three evaluators are offered:

        analytic  - exact, needs a ClosedFormFunction
        spectral  - trigonometric interpolation through φ^∨ on each slice,
                    exact for band-limited samples
        cubic     - scipy RegularGridInterpolator, reports its residual
                    against the spectral result and flags degraded precision

    -r is addressed on the lattice through Grid.reversed_r_index(); the
    first slow sample has no mirror and maps to zero (functions vanish
    there anyway by the support check).

    The antipode is not invariant for h. With φ = G(p,q)·bump(r - 1):

        h(κφ) = ∫ e^{-2λr} Φ(r) dr,   Φ(r) = ∫ φ(p, q, r) dp dq

    which is roughly e^{-2λ} h(φ). haar_witness() builds and evaluates it.

ARCHITECTURE ROLE:
    Used by the algebra, counit, antipode and haar suites, and by the
    operator checks that compare TφT with φ†.

DEBUGGING NOTES:
    - A large dagger residual usually means the cubic path was asked to
      resample a function that is not resolved on the lattice.
    - The two antipode orders differ only by interpolation error; a gap
      above 1e-6 points at the dagger, not at the involution.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate
from scipy.interpolate import RegularGridInterpolator

from functions.closed_form import ClosedFormFunction, GaussianClosedForm, gaussian_test_function
from functions.grid import Grid, SampledFunction
from functions.product import involution
from functions.transforms import partial_fourier_vee
from groups.params import ModelParams
from utils.errors import ConfigurationError, DimensionError
from utils.numerics import ebar

logger = logging.getLogger(__name__)

DAGGER_METHODS = ("analytic", "spectral", "cubic")
INTERPOLATION_BUDGET = 1e-6


# ═══════════════════════════════════════════════════════════════
# HAAR AND COUNIT
# ═══════════════════════════════════════════════════════════════

def haar(phi: SampledFunction) -> complex:
    """Riemann sum of φ times the cell volume."""
    if phi.picture != "pqr":
        raise DimensionError("haar expects a (p,q,r) function")
    return complex(np.sum(phi.samples) * phi.grid.cell_volume)


def _origin(grid: Grid):
    i, j, k = grid.origin_index
    x = grid.fast_points
    if abs(x[i]) > 1e-12 or abs(grid.r_points[k]) > 1e-12:
        raise ConfigurationError(f"origin is not a lattice point of {grid}")
    return i, j, k


def counit(phi: SampledFunction) -> complex:
    """ε(φ) = φ(0, 0, 0)."""
    i, j, k = _origin(phi.grid)
    return complex(phi.samples[i, j, k])


def counit_via_vee(phi: SampledFunction) -> complex:
    """ε(φ) through ∫ φ^∨(x, y, 0) dx dy."""
    _, _, k = _origin(phi.grid)
    f = partial_fourier_vee(phi)
    return complex(np.sum(f.samples[:, :, k]) * f.grid.delta ** 2)


def counit_defect(phi: SampledFunction) -> float:
    return abs(counit(phi) - counit_via_vee(phi))


# ═══════════════════════════════════════════════════════════════
# DAGGER
# ═══════════════════════════════════════════════════════════════

def _spectral_dagger(phi: SampledFunction, lam: float) -> np.ndarray:
    grid = phi.grid
    f = partial_fourier_vee(phi)
    x = f.grid.fast_points
    dd = f.grid.delta
    p = grid.fast_points
    rev = grid.reversed_r_index()
    out = np.zeros(grid.shape, dtype=complex)
    for l, r in enumerate(grid.r_points):
        src = rev[l]
        if src < 0:
            continue
        P = -np.exp(-lam * r) * p
        E = dd * ebar(np.outer(P, x))                 # [a, j]
        values = E @ f.samples[:, :, src] @ E.T
        inside = np.abs(P) <= grid.L
        values[~inside, :] = 0.0
        values[:, ~inside] = 0.0
        out[:, :, l] = np.conj(values)
    return out


def _cubic_dagger(phi: SampledFunction, lam: float) -> np.ndarray:
    grid = phi.grid
    axes = (grid.fast_points, grid.fast_points, grid.r_points)
    re = RegularGridInterpolator(axes, phi.samples.real, method="cubic", bounds_error=False, fill_value=0.0)
    im = RegularGridInterpolator(axes, phi.samples.imag, method="cubic", bounds_error=False, fill_value=0.0)
    A, B, R = grid.mesh()
    s = np.exp(-lam * R)
    pts = np.stack([-s * A, -s * B, -R], axis=-1)
    return np.conj(re(pts) + 1j * im(pts))


def dagger_closed_form(phi: ClosedFormFunction, grid: Grid, lam: float) -> SampledFunction:
    """φ† sampled from a closed form."""
    A, B, R = grid.mesh()
    s = np.exp(-lam * R)
    values = np.conj(phi(np.stack([-s * A, -s * B, -R], axis=-1)))
    return SampledFunction(grid, values, "pqr", {"method": "analytic", "residual": 0.0, "degraded": False})


def dagger(phi: SampledFunction, params: ModelParams, method: str = "spectral",
           closed_form: Optional[ClosedFormFunction] = None) -> SampledFunction:
    """
    φ†(p, q, r) = conj φ(-e^{-λr}p, -e^{-λr}q, -r).

    The result's meta records the method, the interpolation residual and a
    degraded flag (residual above INTERPOLATION_BUDGET).
    """
    if phi.picture != "pqr":
        raise DimensionError("dagger expects a (p,q,r) function")
    if method not in DAGGER_METHODS:
        raise ConfigurationError(f"unknown dagger method {method!r}")
    lam = params.lam
    if method == "analytic":
        if closed_form is None:
            raise ConfigurationError("analytic dagger needs the closed form of φ")
        return dagger_closed_form(closed_form, phi.grid, lam)
    spectral = _spectral_dagger(phi, lam)
    if method == "spectral":
        return SampledFunction(phi.grid, spectral, "pqr", {"method": "spectral", "residual": 0.0, "degraded": False})
    cubic = _cubic_dagger(phi, lam)
    scale = float(np.max(np.abs(spectral))) or 1.0
    residual = float(np.max(np.abs(cubic - spectral))) / scale
    degraded = residual > INTERPOLATION_BUDGET
    if degraded:
        logger.warning("cubic dagger residual %.2e exceeds budget %.0e", residual, INTERPOLATION_BUDGET)
    return SampledFunction(phi.grid, cubic, "pqr", {"method": "cubic", "residual": residual, "degraded": degraded})


# ═══════════════════════════════════════════════════════════════
# ANTIPODE
# ═══════════════════════════════════════════════════════════════

def antipode(phi: SampledFunction, params: ModelParams, closed_form: Optional[ClosedFormFunction] = None,
             method: str = "spectral") -> SampledFunction:
    """
    κ(φ) = (φ*)†, cross-checked against (φ†)*.

    The second order uses the analytic dagger when a closed form is given.
    meta carries 'order_defect' (relative max difference of the two
    orders) and 'degraded'.
    """
    params.require_quantum("antipode")
    first = dagger(involution(phi, params), params, method)
    if closed_form is not None:
        second = involution(dagger(phi, params, "analytic", closed_form), params)
    else:
        second = involution(dagger(phi, params, method), params)
    scale = float(np.max(np.abs(first.samples))) or 1.0
    order_defect = float(np.max(np.abs(first.samples - second.samples))) / scale
    degraded = bool(first.meta.get("degraded") or second.meta.get("degraded"))
    logger.debug("antipode order defect %.3e (%s)", order_defect, method)
    return SampledFunction(phi.grid, first.samples, "pqr",
                           {"order_defect": order_defect, "degraded": degraded,
                            "residual": first.meta.get("residual", 0.0)})


# ═══════════════════════════════════════════════════════════════
# NON-UNIMODULARITY WITNESS
# ═══════════════════════════════════════════════════════════════

WITNESS_GRID = Grid(N=64, L=4.0, N_r=64, L_r=1.5)


@dataclass
class HaarWitness:
    """φ with h(κφ) ≠ h(φ), its values, and the grid cross-check."""
    function: GaussianClosedForm
    lam: float
    h_phi: complex
    h_kappa_phi: complex
    grid_h_phi: Optional[complex] = None
    grid_h_kappa_phi: Optional[complex] = None
    sampled: Optional[SampledFunction] = field(default=None, repr=False)

    @property
    def ratio(self) -> float:
        return float(abs(self.h_kappa_phi / self.h_phi))

    @property
    def grid_ratio(self) -> Optional[float]:
        if self.grid_h_phi is None:
            return None
        return float(abs(self.grid_h_kappa_phi / self.grid_h_phi))


def haar_witness_function(bump_center: float = 1.0, bump_radius: float = 0.3) -> GaussianClosedForm:
    """Gaussian(p, q)·bump(r - 1)."""
    return gaussian_test_function(width=1.0, bump_center=bump_center, bump_radius=bump_radius,
                                  name="haar_witness")


def haar_witness(lam: float = 1.0, hbar: float = 0.1, grid: Grid = WITNESS_GRID,
                 cross_check: bool = True) -> HaarWitness:
    """
    Evaluates h(φ) and h(κφ) for the witness.

    The exact values reduce to one-dimensional r integrals done with
    scipy quad; the grid path runs the full antipode as a cross-check.
    """
    phi = haar_witness_function()
    bump_ = phi.bumps[0]
    lo, hi = bump_.center - bump_.radius, bump_.center + bump_.radius
    fast = phi.fast_total()

    def slow(r):
        return float(phi.slow_factor(np.array([[r]]))[0])

    h_phi = fast * integrate.quad(slow, lo, hi, epsabs=1e-14, epsrel=1e-12)[0]
    h_kphi = fast * integrate.quad(lambda r: np.exp(-2.0 * lam * r) * slow(r), lo, hi,
                                   epsabs=1e-14, epsrel=1e-12)[0]
    witness = HaarWitness(phi, lam, complex(h_phi), complex(h_kphi))
    if cross_check:
        params = ModelParams(n=1, lam=lam, hbar=hbar)
        sampled = phi.sample(grid)
        kphi = antipode(sampled, params, closed_form=phi)
        witness.sampled = sampled
        witness.grid_h_phi = haar(sampled)
        witness.grid_h_kappa_phi = haar(kphi)
    logger.info("haar witness: h(κφ)/h(φ) = %.6f", witness.ratio)
    return witness
