"""
Numerics - Shared numerical helpers

PURPOSE:
    Small, dependency-free building blocks used by every other package:
    the phase characters e(t) and ē(t), the smooth compactly supported bump,
    defect measures, and seeded random generators.

THEORY:
    The whole library uses one Fourier convention:

        e(t) = exp(2πi t)        ē(t) = exp(-2πi t)

    With it the Gaussian exp(-π|x|²) is its own Fourier transform and
    Plancherel holds with no 2π factors. Every kernel and every phase in
    the operator engine is written with ē, so the helpers below are the
    single place that constant lives.

    The bump function

        bump(t) = exp(1 - 1/(1 - t²))   for |t| < 1,   0 otherwise

    is C-infinity, equals 1 at t = 0, and vanishes with all derivatives at
    |t| = 1. It is how compact support in the r (and w) direction is
    enforced rather than approximated.

ARCHITECTURE ROLE:
    Used by:
        - functions/: closed forms, grids, quadrature oracles
        - operators/: phase evaluation for randomized equality tests
        - suites/: defect reporting

DEBUGGING NOTES:
    - relative_defect() returns the absolute defect when the reference is
      exactly zero; inspect both numbers when a check sits near zero.
    - phase_mod1_defect() compares phases on the circle, so 0.999999 and
      0.000001 are close.
"""

from typing import Optional

import numpy as np


TWO_PI = 2.0 * np.pi


# ═══════════════════════════════════════════════════════════════
# PHASE CHARACTERS
# ═══════════════════════════════════════════════════════════════

def e(t):
    """Character e(t) = exp(2πi t), elementwise."""
    return np.exp(1j * TWO_PI * np.asarray(t))


def ebar(t):
    """Conjugate character ē(t) = exp(-2πi t), elementwise."""
    return np.exp(-1j * TWO_PI * np.asarray(t))


def phase_mod1_defect(a, b) -> np.ndarray:
    """
    Distance between two real phases on the circle ℝ/ℤ.

    Complex phases (used by Gaussian kernels) are compared through
    their characters instead.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if np.iscomplexobj(a) or np.iscomplexobj(b):
        return np.abs(ebar(a) - ebar(b))
    d = np.mod(a - b, 1.0)
    return np.minimum(d, 1.0 - d)


# ═══════════════════════════════════════════════════════════════
# COMPACT SUPPORT
# ═══════════════════════════════════════════════════════════════

def bump(t, center: float = 0.0, radius: float = 1.0):
    """
    Smooth bump exp(1 - 1/(1 - u²)) with u = (t - center)/radius.

    Args:
        t: Evaluation points (scalar or array)
        center: Middle of the support
        radius: Half-width of the support, must be positive

    Returns:
        Array of the same shape as t, zero outside |u| < 1

    Teaching Note:
        The division is only evaluated where |u| < 1; np.where alone would
        still evaluate 1/(1-u²) everywhere and emit warnings at |u| = 1.
    """
    if radius <= 0:
        raise ValueError(f"bump radius must be positive, got {radius}")
    u = (np.asarray(t, dtype=float) - center) / radius
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - ui * ui))
    return out


def bump_derivative(t, center: float = 0.0, radius: float = 1.0):
    """d/dt of bump(t, center, radius)."""
    u = (np.asarray(t, dtype=float) - center) / radius
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    g = 1.0 - ui * ui
    out[inside] = np.exp(1.0 - 1.0 / g) * (-2.0 * ui / (g * g)) / radius
    return out


# ═══════════════════════════════════════════════════════════════
# DEFECT MEASURES
# ═══════════════════════════════════════════════════════════════

def relative_defect(value, reference) -> float:
    """max|value - reference| / max|reference| (absolute if reference is 0)."""
    value = np.asarray(value)
    reference = np.asarray(reference)
    num = float(np.max(np.abs(value - reference))) if value.size else 0.0
    den = float(np.max(np.abs(reference))) if reference.size else 0.0
    return num / den if den > 0 else num


def relative_l2(value, reference) -> float:
    """‖value - reference‖₂ / ‖reference‖₂ over all samples."""
    value = np.asarray(value)
    reference = np.asarray(reference)
    den = float(np.linalg.norm(reference.ravel()))
    num = float(np.linalg.norm((value - reference).ravel()))
    return num / den if den > 0 else num


def successive_ratios(values) -> list:
    """[v1/v0, v2/v1, ...]; inf where a predecessor is zero."""
    out = []
    for prev, cur in zip(values[:-1], values[1:]):
        out.append(float(cur / prev) if prev != 0 else float("inf"))
    return out


# ═══════════════════════════════════════════════════════════════
# RANDOMNESS
# ═══════════════════════════════════════════════════════════════

def make_rng(seed: Optional[int] = None, stream: int = 0) -> np.random.Generator:
    """
    Seeded generator; `stream` derives independent child streams.

    Teaching Note:
        SeedSequence spawning gives each check its own stream, so adding a
        check never shifts the random points another check sees.
    """
    ss = np.random.SeedSequence(0 if seed is None else int(seed))
    if stream:
        ss = ss.spawn(stream + 1)[stream]
    return np.random.default_rng(ss)
