"""
Grid - Sampling lattices and sampled functions on G

PURPOSE:
    Defines the finite lattice every numerical function lives on and the
    SampledFunction record that pairs samples with their lattice and
    picture tag.

THEORY:
    Fast axes (p, q) or (x, y): N points, spacing Δ = 2L/N, points
    -L + kΔ for k = 0..N-1, so the origin is the sample k = N/2.

    The transform to the other picture lands on the dual lattice with
    spacing Δ' = 1/(NΔ). With that choice the discrete transform

        F[k] = Δ Σ_j f[j] ē(x_j μ_k)

    is exactly unitary between (Δ-weighted) and (Δ'-weighted) ℓ². When
    NΔ² = 1 (default N=64, L=4, Δ=1/8) the lattice is its own dual.

    The r axis (the slow axis) is never transformed. It has its own N_r,
    L_r, and must contain r = 0 and be symmetric under r → -r up to the
    first sample, so the counit and the antipode can address -r.

ARCHITECTURE ROLE:
    Produced by ClosedFormFunction.sample(), consumed by transforms,
    product and hopf modules, persisted by functions/io.py.

DEBUGGING NOTES:
    - check_support() fails when the outermost r-slices carry more than
      1e-12 of the peak: enlarge L_r or shrink the bump radius.
    - Only n = 1 is supported on grids (three axes); larger n raises.
"""

from dataclasses import dataclass, field, replace
from typing import Tuple

import numpy as np

from utils.errors import ConfigurationError, DimensionError

PICTURES = ("pqr", "xyr")
DUAL_PICTURE = {"pqr": "xyr", "xyr": "pqr"}


@dataclass(frozen=True)
class Grid:
    """
    Lattice for n = 1 functions: N×N fast points, N_r slow points.

    Attributes:
        N: Fast points per axis, a power of two
        L: Fast half-width
        N_r: Slow (r) points, even
        L_r: Slow half-width
    """
    N: int = 64
    L: float = 4.0
    N_r: int = 16
    L_r: float = 0.5

    def __post_init__(self):
        if self.N < 2 or self.N & (self.N - 1):
            raise ConfigurationError(f"grid N must be a power of two, got {self.N}")
        if self.N_r < 2 or self.N_r % 2:
            raise ConfigurationError(f"grid N_r must be even, got {self.N_r}")
        if self.L <= 0 or self.L_r <= 0:
            raise ConfigurationError("grid half-widths must be positive")

    # ───────────────────────────────────────────────────────────
    # spacings and points
    # ───────────────────────────────────────────────────────────

    @property
    def delta(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def delta_r(self) -> float:
        return 2.0 * self.L_r / self.N_r

    @property
    def fast_points(self) -> np.ndarray:
        return -self.L + self.delta * np.arange(self.N)

    @property
    def r_points(self) -> np.ndarray:
        return -self.L_r + self.delta_r * np.arange(self.N_r)

    @property
    def origin_index(self) -> Tuple[int, int, int]:
        return self.N // 2, self.N // 2, self.N_r // 2

    @property
    def shape(self) -> Tuple[int, int, int]:
        return self.N, self.N, self.N_r

    @property
    def cell_volume(self) -> float:
        return self.delta * self.delta * self.delta_r

    def dual(self) -> "Grid":
        """Lattice of the transformed fast axes (spacing 1/(NΔ))."""
        d_dual = 1.0 / (self.N * self.delta)
        return replace(self, L=self.N * d_dual / 2.0)

    @property
    def is_self_dual(self) -> bool:
        return abs(self.N * self.delta * self.delta - 1.0) < 1e-12

    def mesh(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(A, B, R) arrays of shape (N, N, N_r) in row-major (fast, fast, r) order."""
        f = self.fast_points
        return np.meshgrid(f, f, self.r_points, indexing="ij")

    def reversed_r_index(self) -> np.ndarray:
        """Index of -r_k for each k; -1 where -r_k is not on the lattice."""
        k = np.arange(self.N_r)
        out = (self.N_r - k) % self.N_r
        out[0] = -1
        return out

    def to_dict(self) -> dict:
        return {"N": self.N, "L": self.L, "N_r": self.N_r, "L_r": self.L_r}


@dataclass
class SampledFunction:
    """
    Samples of a function on a Grid in a given picture.

    Attributes:
        grid: Lattice of the samples (fast axes in this picture's units)
        samples: complex array of shape grid.shape
        picture: 'pqr' (function on G) or 'xyr' (partial Fourier side)
    """
    grid: Grid
    samples: np.ndarray
    picture: str = "pqr"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.picture not in PICTURES:
            raise DimensionError(f"unknown picture tag {self.picture!r}")
        self.samples = np.asarray(self.samples, dtype=complex)
        if self.samples.shape != self.grid.shape:
            raise DimensionError(f"samples shape {self.samples.shape} does not match grid {self.grid.shape}")

    def with_samples(self, samples: np.ndarray, picture: str = None, grid: Grid = None) -> "SampledFunction":
        return SampledFunction(grid or self.grid, samples, picture or self.picture)

    def check_compatible(self, other: "SampledFunction"):
        if other.grid != self.grid:
            raise DimensionError(f"grid mismatch: {self.grid} vs {other.grid}")
        if other.picture != self.picture:
            raise DimensionError(f"picture mismatch: {self.picture} vs {other.picture}")

    # ───────────────────────────────────────────────────────────
    # norms
    # ───────────────────────────────────────────────────────────

    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.samples)) * self.grid.cell_volume)

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.samples) ** 2) * self.grid.cell_volume))

    def check_support(self, rel: float = 1e-12) -> bool:
        """True when the outermost r-slices are below rel·peak."""
        peak = np.max(np.abs(self.samples))
        if peak == 0:
            return True
        edge = max(np.max(np.abs(self.samples[:, :, 0])), np.max(np.abs(self.samples[:, :, -1])))
        return bool(edge <= rel * peak)

    def __add__(self, other: "SampledFunction") -> "SampledFunction":
        self.check_compatible(other)
        return self.with_samples(self.samples + other.samples)

    def __sub__(self, other: "SampledFunction") -> "SampledFunction":
        self.check_compatible(other)
        return self.with_samples(self.samples - other.samples)

    def scale(self, c: complex) -> "SampledFunction":
        return self.with_samples(c * self.samples)


def require_n1(n: int):
    if n != 1:
        raise DimensionError(f"grid engine supports n = 1 only, got n = {n}")
