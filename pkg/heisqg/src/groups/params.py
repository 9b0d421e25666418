"""
Model Parameters - The constants every construction depends on

PURPOSE:
    Holds the dimension n, the deformation constant λ and the Planck-type
    constant ℏ. Nothing else in the library keeps global state; every
    function that needs one of these receives a ModelParams.

THEORY:
    - n counts the (x_i, y_i) pairs of the Heisenberg group, so H has
      dimension 2n+1 and the dual group G has coordinates (p, q, r) with
      p, q ∈ ℝⁿ.
    - λ enters the group law of G through e^{λr} and every cocycle through
      η_λ(r) = (e^{2λr} - 1)/(2λ). The quantum objects need λ ≠ 0; λ = 0 is
      only meaningful for classical-limit evaluations.
    - ℏ scales the cocycle: every phase ē[η_λ(r)β(·,·)] becomes
      ē[ℏ η_λ(r) β(·,·)]. ℏ = 0 collapses the deformed product to the
      pointwise one.

ARCHITECTURE ROLE:
    Created by the config loader, passed to every package.

DEBUGGING NOTES:
    - require_quantum() is the single gate that rejects λ = 0.
"""

from dataclasses import dataclass, replace

from utils.errors import ConfigurationError


@dataclass(frozen=True)
class ModelParams:
    """
    Dimension and deformation constants.

    Attributes:
        n: Number of (x_i, y_i) pairs, n ≥ 1
        lam: The deformation constant λ
        hbar: Cocycle scale ℏ (1.0 reproduces the undeformed-ℏ setting)
    """
    n: int = 1
    lam: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ConfigurationError(f"n must be a positive integer, got {self.n}")

    @property
    def is_classical(self) -> bool:
        return self.lam == 0.0

    def require_quantum(self, what: str = "this construction"):
        """Raise ConfigurationError when λ = 0."""
        if self.lam == 0.0:
            raise ConfigurationError(f"{what} requires lambda != 0")

    def with_hbar(self, hbar: float) -> "ModelParams":
        return replace(self, hbar=float(hbar))

    def with_lambda(self, lam: float) -> "ModelParams":
        return replace(self, lam=float(lam))

    def to_dict(self) -> dict:
        return {"n": int(self.n), "lambda": float(self.lam), "hbar": float(self.hbar)}
