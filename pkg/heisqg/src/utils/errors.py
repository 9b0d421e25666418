"""
Errors - Exception types raised by heisqg.

Argument problems subclass ValueError so callers that already catch
ValueError keep working. Numerical identities that fail are never raised;
suites record them as failing checks instead.
"""


class HeisqgError(Exception):
    """Base class for every heisqg-specific error."""


class DimensionError(HeisqgError, ValueError):
    """Vector length, dimension n, grid or picture tag mismatch."""


class ConfigurationError(HeisqgError, ValueError):
    """Invalid run configuration or a grid that cannot serve the request."""


class SignatureError(HeisqgError, ValueError):
    """Operator leg signatures do not match, or a leg index is out of range."""


class UnsupportedOperatorError(HeisqgError):
    """Operator is not affine/quadratic in the fast coordinates."""


class SingularSliceError(HeisqgError):
    """Auxiliary Gaussian form is degenerate on at least one slow slice."""

    def __init__(self, message: str, rows=None):
        super().__init__(message)
        self.rows = rows


class OracleDisagreementError(HeisqgError):
    """A reduced formula disagrees with its brute-force quadrature oracle."""

    def __init__(self, message: str, defect: float = float("nan"), tol: float = float("nan")):
        super().__init__(message)
        self.defect = defect
        self.tol = tol
