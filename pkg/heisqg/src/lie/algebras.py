"""
Lie Algebras - Exact structure constants for 𝔥, 𝔥̃, 𝔤, 𝔤̃

PURPOSE:
    Declares the four Lie algebras the bialgebra computations run over,
    with exact sympy coefficients and λ kept as a symbol (or an exact
    rational when a concrete value is requested).

THEORY:
    Heisenberg algebra 𝔥, basis x_1..x_n, y_1..y_n, z:

        [x_i, y_j] = δ_ij z,      z central

    Extended algebra 𝔥̃ adds a grading element d:

        [d, x_i] = x_i,           [d, y_i] = -y_i

    Dual algebra 𝔤, basis p_1..p_n, q_1..q_n, r:

        [p_i, r] = λ p_i,         [q_i, r] = λ q_i,       [p_i, q_j] = 0

    Extended dual 𝔤̃ adds s, central. The pairing identifies
    x_i ↔ p_i, y_i ↔ q_i, z ↔ r, d ↔ s.

    Structure constants c_ij^k are stored for both orders of (i, j) so
    antisymmetry holds by construction; the Jacobi identity is verified
    when a LieAlgebraSpec is built.

ARCHITECTURE ROLE:
    lie/tensors.py contracts LieTensors against these constants.

DEBUGGING NOTES:
    - A failing Jacobi check names the first offending triple of labels.
    - Pass lam=sympy.Rational(1, 2) (or 0.5, converted exactly) to pin λ.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Tuple

import sympy

LAM = sympy.Symbol("lambda", real=True)

Brackets = Dict[Tuple[int, int], Dict[int, sympy.Expr]]


def exact(value) -> sympy.Expr:
    """Exact sympy form of a scalar (floats go through their decimal string)."""
    if isinstance(value, sympy.Basic):
        return value
    if isinstance(value, int):
        return sympy.Integer(value)
    return sympy.Rational(str(value))


@dataclass
class LieAlgebraSpec:
    """
    Ordered basis plus exact structure constants.

    Attributes:
        name: Short identifier ('h', 'h_ext', 'g', 'g_ext')
        labels: Ordered basis labels
        brackets: {(i, j): {k: c_ij^k}} for nonzero brackets, both orders
        core_labels: Labels spanning the Heisenberg part (used for
            invariance checks restricted to 𝔥)
        n: Number of (x_i, y_i) pairs
    """
    name: str
    labels: Tuple[str, ...]
    brackets: Brackets
    core_labels: Tuple[str, ...]
    n: int
    lam: sympy.Expr = field(default=LAM)

    def __post_init__(self):
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        for (i, j), out in list(self.brackets.items()):
            mirror = self.brackets.get((j, i), {})
            for k, c in out.items():
                if sympy.expand(mirror.get(k, 0) + c) != 0:
                    raise ValueError(
                        f"{self.name}: structure constants not antisymmetric at "
                        f"({self.labels[i]}, {self.labels[j]})"
                    )
        bad = self.jacobi_violations()
        if bad:
            raise ValueError(f"{self.name}: Jacobi identity fails at {bad[0]}")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self._index[label]

    def structure_constant(self, i: int, j: int, k: int) -> sympy.Expr:
        return self.brackets.get((i, j), {}).get(k, sympy.Integer(0))

    def bracket_indices(self, i: int, j: int) -> Dict[int, sympy.Expr]:
        """[e_i, e_j] as {k: coefficient}."""
        return self.brackets.get((i, j), {})

    def bracket_vectors(self, u: Dict[int, sympy.Expr], v: Dict[int, sympy.Expr]) -> Dict[int, sympy.Expr]:
        out: Dict[int, sympy.Expr] = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.bracket_indices(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: sympy.expand(c) for k, c in out.items() if sympy.expand(c) != 0}

    def jacobi_violations(self) -> List[Tuple[str, str, str]]:
        """Triples (i<j<k) where [[e_i,e_j],e_k] + cyclic ≠ 0."""
        bad = []
        one = sympy.Integer(1)
        for i, j, k in combinations(range(self.dim), 3):
            ei, ej, ek = {i: one}, {j: one}, {k: one}
            total: Dict[int, sympy.Expr] = {}
            for a, b, c in ((ei, ej, ek), (ej, ek, ei), (ek, ei, ej)):
                for idx, coef in self.bracket_vectors(self.bracket_vectors(a, b), c).items():
                    total[idx] = total.get(idx, 0) + coef
            if any(sympy.expand(v) != 0 for v in total.values()):
                bad.append((self.labels[i], self.labels[j], self.labels[k]))
        return bad

    def constants_array(self) -> sympy.ImmutableDenseNDimArray:
        """Dense c[i, j, k] array."""
        d = self.dim
        flat = [self.structure_constant(i, j, k) for i in range(d) for j in range(d) for k in range(d)]
        return sympy.ImmutableDenseNDimArray(flat, (d, d, d))


# ═══════════════════════════════════════════════════════════════
# CONCRETE ALGEBRAS
# ═══════════════════════════════════════════════════════════════

def _labels(n: int, a: str, b: str, c: str, extra: str = None) -> Tuple[str, ...]:
    out = [f"{a}{i + 1}" for i in range(n)] + [f"{b}{i + 1}" for i in range(n)] + [c]
    if extra:
        out.append(extra)
    return tuple(out)


def _set(br: Brackets, i: int, j: int, k: int, c):
    br.setdefault((i, j), {})[k] = c
    br.setdefault((j, i), {})[k] = -c


def heisenberg(n: int = 1) -> LieAlgebraSpec:
    """𝔥: [x_i, y_i] = z."""
    labels = _labels(n, "x", "y", "z")
    br: Brackets = {}
    z = 2 * n
    for i in range(n):
        _set(br, i, n + i, z, sympy.Integer(1))
    return LieAlgebraSpec("h", labels, br, labels, n)


def extended_heisenberg(n: int = 1) -> LieAlgebraSpec:
    """𝔥̃: 𝔥 plus d with [d, x_i] = x_i, [d, y_i] = -y_i."""
    labels = _labels(n, "x", "y", "z", "d")
    br: Brackets = {}
    z, d = 2 * n, 2 * n + 1
    for i in range(n):
        _set(br, i, n + i, z, sympy.Integer(1))
        _set(br, d, i, i, sympy.Integer(1))
        _set(br, d, n + i, n + i, sympy.Integer(-1))
    return LieAlgebraSpec("h_ext", labels, br, labels[:-1], n)


def dual_g(n: int = 1, lam=LAM) -> LieAlgebraSpec:
    """𝔤: [p_i, r] = λ p_i, [q_i, r] = λ q_i."""
    lam = exact(lam)
    labels = _labels(n, "p", "q", "r")
    br: Brackets = {}
    r = 2 * n
    for i in range(n):
        _set(br, i, r, i, lam)
        _set(br, n + i, r, n + i, lam)
    return LieAlgebraSpec("g", labels, br, labels, n, lam)


def extended_dual_g(n: int = 1, lam=LAM) -> LieAlgebraSpec:
    """𝔤̃: 𝔤 plus a central s."""
    lam = exact(lam)
    labels = _labels(n, "p", "q", "r", "s")
    br: Brackets = {}
    r = 2 * n
    for i in range(n):
        _set(br, i, r, i, lam)
        _set(br, n + i, r, n + i, lam)
    return LieAlgebraSpec("g_ext", labels, br, labels[:-1], n, lam)


DUAL_PREFIX = {"x": "p", "y": "q", "z": "r", "d": "s"}


def dual_label(label: str) -> str:
    """Pairing partner of a basis label of 𝔥̃ (x1 → p1, z → r, d → s)."""
    return DUAL_PREFIX[label[0]] + label[1:]
