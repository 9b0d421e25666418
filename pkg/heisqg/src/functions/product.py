"""
Product - Twisted convolution and the deformed multiplication

PURPOSE:
    Implements the algebra structure of 𝒜 on grids:

        (f ∗_σ g)(x, y, r) = ∫ f(x̃, ỹ, r) g(x - x̃, y - ỹ, r) ē[ℏη_λ(r) β(x̃, y - ỹ)] dx̃ dỹ
        φ × ψ = (φ^∨ ∗_σ ψ^∨)^∧
        f*(x, y, r) = conj f(-x, -y, r) · ē[ℏη_λ(r) β(x, y)]

THEORY:
    For fixed r the phase σ^r((x,y),(x',y')) = ē[ℏη_λ(r) β(x, y')] is a
    normalized 2-cocycle on the abelian group H/Z = ℝ²ⁿ, so ∗_σ is
    associative and f ↦ f* is an anti-linear anti-automorphism.

    Two engines compute the per-slice sum on the discrete torus:

        direct: Σ_k A_k B_k with A_k[j,m] = f[k, j+h-m] ē[c x_k y_m],
                B_k[m,i] = g[i-k+h, m]                         O(N⁴)
        fft:    the m-sum is a circular convolution in y, so it is
                evaluated with one FFT pair per output row      O(N³ log N)

    (h = N/2 is the origin index, indices are mod N, c = ℏη_λ(r).) The two
    agree to round-off; the fft engine is the default.

    The direct-formula oracle never touches φ^∨ of ψ:

        (φ × ψ)(p,q,r) = ∫ dx̃ ē(p x̃) [∫ dp' e(p' x̃) φ(p', q, r)] ψ(p, q + ℏη_λ(r) x̃, r)

    and needs ψ off the lattice, so it takes closed forms.

ARCHITECTURE ROLE:
    Called by hopf.py (trace checks, antipode), limits.py (semiclassical
    defect) and the algebra suite.

DEBUGGING NOTES:
    - Both engines wrap indices periodically. Keep test functions well
      inside the box or the wrap shows up as an associativity defect.
    - ℏ = 0 makes the product exactly pointwise on the lattice.
"""

import logging
from typing import Tuple

import numpy as np
from scipy import fft as sp_fft

from functions.closed_form import ClosedFormFunction
from functions.grid import Grid, SampledFunction, require_n1
from functions.transforms import partial_fourier_vee, partial_fourier_wedge
from groups.laws import eta
from groups.params import ModelParams
from utils.errors import ConfigurationError, DimensionError
from utils.numerics import e, ebar, phase_mod1_defect

logger = logging.getLogger(__name__)

ENGINES = ("fft", "direct")


# ═══════════════════════════════════════════════════════════════
# COCYCLE
# ═══════════════════════════════════════════════════════════════

def sigma_phase(h1: np.ndarray, h2: np.ndarray, r: float, params: ModelParams) -> float:
    """Real phase t with σ^r(h1, h2) = ē[t]; h = (x, y) concatenated."""
    n = params.n
    h1 = np.asarray(h1, dtype=float)
    h2 = np.asarray(h2, dtype=float)
    return float(params.hbar * eta(params.lam, r) * np.dot(h1[:n], h2[n:]))


def sigma(h1, h2, r: float, params: ModelParams) -> complex:
    return complex(ebar(sigma_phase(h1, h2, r, params)))


def sigma_cocycle_defect(h1, h2, h3, r: float, params: ModelParams) -> float:
    """
    |σ(hh', h'')σ(h, h') - σ(h, h'h'')σ(h', h'')| measured on the circle.

    H/Z is abelian, so hh' is plain addition.
    """
    h1, h2, h3 = (np.asarray(h, dtype=float) for h in (h1, h2, h3))
    lhs = sigma_phase(h1 + h2, h3, r, params) + sigma_phase(h1, h2, r, params)
    rhs = sigma_phase(h1, h2 + h3, r, params) + sigma_phase(h2, h3, r, params)
    return float(phase_mod1_defect(lhs, rhs))


# ═══════════════════════════════════════════════════════════════
# TWISTED CONVOLUTION
# ═══════════════════════════════════════════════════════════════

def _conv_slice_direct(f: np.ndarray, g: np.ndarray, c: float, x: np.ndarray, delta: float) -> np.ndarray:
    N = f.shape[0]
    h = N // 2
    idx = np.arange(N)
    J, M = np.meshgrid(idx, idx, indexing="ij")
    shifted = (J + h - M) % N
    phase = ebar(c * np.outer(x, x))                       # [k, m]
    A = f[:, shifted] * phase[:, None, :]                  # [k, j, m]
    rows = (idx[None, :] - idx[:, None] + h) % N           # [k, i]
    B = np.transpose(g[rows, :], (0, 2, 1))                # [k, m, i]
    out = np.matmul(A, B).sum(axis=0)                      # [j, i]
    return delta * delta * out.T


def _conv_slice_fft(f: np.ndarray, g: np.ndarray, c: float, x: np.ndarray, delta: float) -> np.ndarray:
    N = f.shape[0]
    h = N // 2
    idx = np.arange(N)
    phase = ebar(c * np.outer(x, x))                       # [k, m]
    rows = (idx[None, :] - idx[:, None] + h) % N           # [k, i]
    G = sp_fft.fft(g[rows, :] * phase[:, None, :], axis=2)  # [k, i, w]
    F = sp_fft.fft(f, axis=1)                              # [k, w]
    S = np.einsum("kw,kiw->iw", F, G)
    return delta * delta * np.roll(sp_fft.ifft(S, axis=1), -h, axis=1)


_SLICE_ENGINES = {"direct": _conv_slice_direct, "fft": _conv_slice_fft}


def twisted_conv_slice(f: np.ndarray, g: np.ndarray, c: float, grid: Grid, engine: str = "fft") -> np.ndarray:
    """One r-slice of f ∗_σ g with twist constant c = ℏη_λ(r)."""
    if engine not in _SLICE_ENGINES:
        raise ConfigurationError(f"unknown convolution engine {engine!r}; choose from {ENGINES}")
    return _SLICE_ENGINES[engine](f, g, c, grid.fast_points, grid.delta)


def twist_constants(grid: Grid, params: ModelParams) -> np.ndarray:
    """c_l = ℏ·η_λ(r_l) for every slow sample."""
    return params.hbar * np.asarray(eta(params.lam, grid.r_points), dtype=float)


def twisted_conv_sigma(f: SampledFunction, g: SampledFunction, params: ModelParams,
                       engine: str = "fft") -> SampledFunction:
    """
    Per-r-slice twisted convolution of two (x, y, r) functions.

    Args:
        f, g: Functions on a common grid in the (x, y, r) picture
        params: Supplies n (must be 1), λ and ℏ
        engine: 'fft' (default) or 'direct'

    Returns:
        f ∗_σ g on the same grid
    """
    require_n1(params.n)
    if f.picture != "xyr" or g.picture != "xyr":
        raise DimensionError(f"twisted convolution needs (x,y,r) inputs, got {f.picture}, {g.picture}")
    f.check_compatible(g)
    cs = twist_constants(f.grid, params)
    out = np.empty(f.grid.shape, dtype=complex)
    for l, c in enumerate(cs):
        out[:, :, l] = twisted_conv_slice(f.samples[:, :, l], g.samples[:, :, l], c, f.grid, engine)
    logger.debug("twisted convolution (%s engine) over %d slices", engine, len(cs))
    return f.with_samples(out)


# ═══════════════════════════════════════════════════════════════
# DEFORMED PRODUCT AND INVOLUTION
# ═══════════════════════════════════════════════════════════════

def deformed_mul(phi: SampledFunction, psi: SampledFunction, params: ModelParams,
                 engine: str = "fft") -> SampledFunction:
    """φ × ψ = (φ^∨ ∗_σ ψ^∨)^∧ on the grid of φ."""
    if phi.picture != "pqr" or psi.picture != "pqr":
        raise DimensionError("deformed_mul expects (p,q,r) functions")
    phi.check_compatible(psi)
    conv = twisted_conv_sigma(partial_fourier_vee(phi), partial_fourier_vee(psi), params, engine)
    return partial_fourier_wedge(conv, target_grid=phi.grid)


def involution_vee(f: SampledFunction, params: ModelParams) -> SampledFunction:
    """f*(x, y, r) = conj f(-x, -y, r) · ē[ℏη_λ(r) β(x, y)] on the lattice."""
    require_n1(params.n)
    N = f.grid.N
    refl = (N - np.arange(N)) % N
    x = f.grid.fast_points
    cs = twist_constants(f.grid, params)
    phase = ebar(cs[None, None, :] * np.outer(x, x)[:, :, None])
    return f.with_samples(np.conj(f.samples[np.ix_(refl, refl)]) * phase)


def involution(phi: SampledFunction, params: ModelParams) -> SampledFunction:
    """φ* = (f*)^∧ with f = φ^∨."""
    if phi.picture != "pqr":
        raise DimensionError("involution expects a (p,q,r) function")
    return partial_fourier_wedge(involution_vee(partial_fourier_vee(phi), params), target_grid=phi.grid)


# ═══════════════════════════════════════════════════════════════
# DIRECT-FORMULA ORACLE
# ═══════════════════════════════════════════════════════════════

def direct_product_oracle(phi: ClosedFormFunction, psi: ClosedFormFunction, grid: Grid,
                          params: ModelParams) -> SampledFunction:
    """
    φ × ψ from the double-integral formula, sampled on `grid`.

    The x̃ integral runs over the dual lattice, the p' integral over the
    grid itself; ψ is evaluated at the sheared points analytically.
    """
    require_n1(params.n)
    p = grid.fast_points
    xt = grid.dual().fast_points
    d, dd = grid.delta, grid.dual().delta
    cs = twist_constants(grid, params)
    E_in = e(np.outer(xt, p))                 # [x̃, p']
    E_out = ebar(np.outer(p, xt))             # [p, x̃]
    out = np.empty(grid.shape, dtype=complex)
    P, Q = np.meshgrid(p, p, indexing="ij")
    for l, (r, c) in enumerate(zip(grid.r_points, cs)):
        phi_slice = phi(np.stack([P, Q, np.full_like(P, r)], axis=-1))    # [p', q]
        inner = d * E_in @ phi_slice                                       # [x̃, q]
        # ψ(p, q + c x̃, r) on the [p, q, x̃] block
        Pb = np.broadcast_to(p[:, None, None], (p.size, p.size, xt.size))
        Qb = p[None, :, None] + c * xt[None, None, :]
        Qb = np.broadcast_to(Qb, Pb.shape)
        psi_block = psi(np.stack([Pb, Qb, np.full(Pb.shape, r)], axis=-1))
        out[:, :, l] = dd * np.einsum("ax,xq,aqx->aq", E_out, inner, psi_block)
    return SampledFunction(grid, out, "pqr", {"engine": "direct-formula"})


# ═══════════════════════════════════════════════════════════════
# OPERATOR NORM
# ═══════════════════════════════════════════════════════════════

def operator_norm_estimate(phi: SampledFunction, params: ModelParams, iterations: int = 40,
                           seed: int = 0) -> Tuple[float, float]:
    """
    Power-iteration estimate of ‖L_φ‖ against its L¹ bound.

    L_φ acts on each r-slice as v ↦ f ∗_σ v with f = φ^∨; the estimate is
    the largest slice value of sqrt(⟨L*L v, v⟩). Returns
    (estimate, sup_r ‖f(·,·,r)‖_{L¹}).
    """
    f = partial_fourier_vee(phi)
    fstar = involution_vee(f, params)
    grid = f.grid
    cs = twist_constants(grid, params)
    rng = np.random.default_rng(seed)
    best = 0.0
    for l, c in enumerate(cs):
        a = f.samples[:, :, l]
        if not np.any(a):
            continue
        v = rng.standard_normal((grid.N, grid.N)) + 1j * rng.standard_normal((grid.N, grid.N))
        v /= np.linalg.norm(v)
        value = 0.0
        for _ in range(iterations):
            w = twisted_conv_slice(fstar.samples[:, :, l], twisted_conv_slice(a, v, c, grid), c, grid)
            value = float(np.sqrt(abs(np.vdot(v, w))))
            nrm = np.linalg.norm(w)
            if nrm == 0:
                break
            v = w / nrm
        best = max(best, value)
    bound = float(np.max(np.sum(np.abs(f.samples), axis=(0, 1))) * grid.delta ** 2)
    return best, bound
