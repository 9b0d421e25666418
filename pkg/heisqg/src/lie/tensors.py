"""
Lie Tensors - Exact r-matrix, CYBE, cocycles δ and θ, group cocycle F

PURPOSE:
    Exact tensor algebra of order 1 to 3 over a LieAlgebraSpec. Hosts the
    classical r-matrix, the classical Yang-Baxter defect, the invariance
    defect of r₁₂ + r₂₁, the cobracket δ = ad(r), the dual bracket it
    induces, the map θ and the group 1-cocycle F.

THEORY:
    Classical r-matrix on 𝔥̃:

        r = λ (z⊗d + d⊗z + 2 Σ x_i⊗y_i)

    CYBE defect, with c the structure constants and summation implied:

        [r₁₂, r₁₃]^{abc} = r^{ib} r^{kc} c_ik^a
        [r₁₂, r₂₃]^{abc} = r^{aj} r^{kc} c_jk^b
        [r₁₃, r₂₃]^{abc} = r^{ai} r^{bk} c_ik^c

    Cobracket δ(X) = (ad_X⊗1 + 1⊗ad_X)(r). With a∧b = a⊗b - b⊗a it gives
    δ(x_i) = λ x_i∧z, δ(y_i) = λ y_i∧z, δ(z) = 0.

    Dual bracket on 𝔤: ⟨[μ, ν], X⟩ = ⟨μ⊗ν, δ(X)⟩, i.e.

        [μ_a, μ_b] = Σ_k δ(X_k)^{ab} μ_k

    θ: 𝔤 → 𝔤⊗𝔤 is dual to the bracket of 𝔥: θ(μ)^{ab} = c_ab^{μ}, giving
    θ(r) = Σ p_i∧q_i and θ(p_i) = θ(q_i) = 0.

    Group cocycle on G: F(r) = ((1 - e^{-2λr})/(2λ)) Σ p_i∧q_i with
    F(r₁+r₂) = F(r₁) + e^{-2λr₁} F(r₂) and F'(0) = θ(r).

ARCHITECTURE ROLE:
    Exact layer under the 'lie' suite. Everything is sympy except F, whose
    coefficients are floats by nature.

DEBUGGING NOTES:
    - is_zero() expands every entry; a nonzero CYBE entry prints as a
      polynomial in λ, which usually points at a sign in one of the three
      contractions above.
    - Components are addressed by label tuples: t[('x1', 'y1')].
"""

import json
from typing import Dict, Iterable, Iterator, List, Tuple

import numpy as np
import sympy

from lie.algebras import (
    LAM,
    LieAlgebraSpec,
    dual_g,
    dual_label,
    exact,
    extended_dual_g,
    extended_heisenberg,
    heisenberg,
)
from utils.errors import DimensionError

Index = Tuple[int, ...]


class LieTensor:
    """
    Element of alg^{⊗k} for k ∈ {1, 2, 3}.

    Coefficients live in a dict keyed by index tuples; `array` gives the
    dense sympy view.
    """

    def __init__(self, algebra: LieAlgebraSpec, order: int, coeffs: Dict[Index, sympy.Expr] = None):
        if order not in (1, 2, 3):
            raise ValueError(f"order must be 1, 2 or 3, got {order}")
        self.algebra = algebra
        self.order = order
        self.coeffs: Dict[Index, sympy.Expr] = {}
        for idx, c in (coeffs or {}).items():
            if len(idx) != order or any(not 0 <= i < algebra.dim for i in idx):
                raise DimensionError(f"index {idx} invalid for order {order} over {algebra.name}")
            c = sympy.expand(sympy.sympify(c))
            if c != 0:
                self.coeffs[tuple(idx)] = c

    # ───────────────────────────────────────────────────────────
    # construction
    # ───────────────────────────────────────────────────────────

    @classmethod
    def zero(cls, algebra: LieAlgebraSpec, order: int) -> "LieTensor":
        return cls(algebra, order)

    @classmethod
    def basis(cls, algebra: LieAlgebraSpec, label: str) -> "LieTensor":
        return cls(algebra, 1, {(algebra.index(label),): 1})

    @classmethod
    def from_labels(cls, algebra: LieAlgebraSpec, entries: Dict[Tuple[str, ...], object]) -> "LieTensor":
        order = len(next(iter(entries))) if entries else 1
        coeffs = {tuple(algebra.index(l) for l in key): v for key, v in entries.items()}
        return cls(algebra, order, coeffs)

    # ───────────────────────────────────────────────────────────
    # access
    # ───────────────────────────────────────────────────────────

    def __getitem__(self, labels) -> sympy.Expr:
        if isinstance(labels, str):
            labels = (labels,)
        idx = tuple(self.algebra.index(l) for l in labels)
        return self.coeffs.get(idx, sympy.Integer(0))

    def items(self) -> Iterator[Tuple[Index, sympy.Expr]]:
        return iter(self.coeffs.items())

    @property
    def array(self) -> sympy.ImmutableDenseNDimArray:
        d = self.algebra.dim
        shape = (d,) * self.order
        flat = [self.coeffs.get(idx, sympy.Integer(0)) for idx in np.ndindex(*shape)]
        return sympy.ImmutableDenseNDimArray(flat, shape)

    def subs(self, mapping) -> "LieTensor":
        return LieTensor(self.algebra, self.order, {k: v.subs(mapping) for k, v in self.coeffs.items()})

    def to_numpy(self, lam: float = None) -> np.ndarray:
        d = self.algebra.dim
        out = np.zeros((d,) * self.order)
        for idx, c in self.coeffs.items():
            if lam is not None:
                c = c.subs(LAM, lam)
            out[idx] = float(c)
        return out

    # ───────────────────────────────────────────────────────────
    # arithmetic
    # ───────────────────────────────────────────────────────────

    def _check(self, other: "LieTensor"):
        if other.algebra.name != self.algebra.name or other.algebra.n != self.algebra.n:
            raise DimensionError(f"algebra mismatch: {self.algebra.name} vs {other.algebra.name}")
        if other.order != self.order:
            raise DimensionError(f"order mismatch: {self.order} vs {other.order}")

    def __add__(self, other: "LieTensor") -> "LieTensor":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return LieTensor(self.algebra, self.order, out)

    def __neg__(self) -> "LieTensor":
        return LieTensor(self.algebra, self.order, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "LieTensor") -> "LieTensor":
        return self + (-other)

    def __rmul__(self, scalar) -> "LieTensor":
        s = sympy.sympify(scalar)
        return LieTensor(self.algebra, self.order, {k: s * v for k, v in self.coeffs.items()})

    def is_zero(self) -> bool:
        return all(sympy.expand(v) == 0 for v in self.coeffs.values())

    def equals(self, other: "LieTensor") -> bool:
        return (self - other).is_zero()

    def flip(self) -> "LieTensor":
        """t₂₁ for an order-2 tensor."""
        if self.order != 2:
            raise DimensionError("flip needs an order-2 tensor")
        return LieTensor(self.algebra, 2, {(j, i): v for (i, j), v in self.coeffs.items()})

    def __repr__(self):
        terms = []
        for idx, c in sorted(self.coeffs.items()):
            terms.append(f"({c})·" + "⊗".join(self.algebra.labels[i] for i in idx))
        return " + ".join(terms) if terms else "0"


# ═══════════════════════════════════════════════════════════════
# BASIC OPERATIONS
# ═══════════════════════════════════════════════════════════════

def wedge(a: LieTensor, b: LieTensor) -> LieTensor:
    """a∧b = a⊗b - b⊗a for two vectors."""
    a._check(b)
    if a.order != 1:
        raise DimensionError("wedge needs vectors")
    out: Dict[Index, sympy.Expr] = {}
    for (i,), u in a.items():
        for (j,), v in b.items():
            out[(i, j)] = out.get((i, j), 0) + u * v
            out[(j, i)] = out.get((j, i), 0) - u * v
    return LieTensor(a.algebra, 2, out)


def bracket(X: LieTensor, Y: LieTensor) -> LieTensor:
    """[X, Y] for two order-1 tensors over the same algebra."""
    X._check(Y)
    if X.order != 1:
        raise DimensionError("bracket needs order-1 tensors")
    u = {i: c for (i,), c in X.items()}
    v = {j: c for (j,), c in Y.items()}
    out = X.algebra.bracket_vectors(u, v)
    return LieTensor(X.algebra, 1, {(k,): c for k, c in out.items()})


def ad_action(X: LieTensor, t: LieTensor) -> LieTensor:
    """(ad_X ⊗ 1 ⊗ ... + ... + 1 ⊗ ... ⊗ ad_X)(t)."""
    alg = t.algebra
    x = {i: c for (i,), c in X.items()}
    out: Dict[Index, sympy.Expr] = {}
    for idx, coef in t.items():
        for slot in range(t.order):
            for k, c in alg.bracket_vectors(x, {idx[slot]: sympy.Integer(1)}).items():
                new = idx[:slot] + (k,) + idx[slot + 1:]
                out[new] = out.get(new, 0) + coef * c
    return LieTensor(alg, t.order, out)


# ═══════════════════════════════════════════════════════════════
# CLASSICAL R-MATRIX AND CYBE
# ═══════════════════════════════════════════════════════════════

def classical_r_matrix(n: int = 1, lam=LAM) -> LieTensor:
    """r = λ(z⊗d + d⊗z + 2 Σ x_i⊗y_i) over 𝔥̃."""
    lam = exact(lam)
    alg = extended_heisenberg(n)
    alg.lam = lam
    entries = {("z", "d"): lam, ("d", "z"): lam}
    for i in range(1, n + 1):
        entries[(f"x{i}", f"y{i}")] = 2 * lam
    return LieTensor.from_labels(alg, entries)


def cybe_defect(r: LieTensor) -> LieTensor:
    """[r₁₂, r₁₃] + [r₁₂, r₂₃] + [r₁₃, r₂₃] as an order-3 tensor."""
    alg = r.algebra
    out: Dict[Index, sympy.Expr] = {}

    def add(idx, v):
        out[idx] = out.get(idx, 0) + v

    terms = list(r.items())
    for (i, b), u in terms:
        for (k, c), v in terms:
            # [r12, r13]: first legs bracketed
            for a, s in alg.bracket_indices(i, k).items():
                add((a, b, c), u * v * s)
    for (a, j), u in terms:
        for (k, c), v in terms:
            # [r12, r23]: second leg of r12 with first leg of r23
            for b, s in alg.bracket_indices(j, k).items():
                add((a, b, c), u * v * s)
    for (a, i), u in terms:
        for (b, k), v in terms:
            # [r13, r23]: second legs bracketed into the third slot
            for c, s in alg.bracket_indices(i, k).items():
                add((a, b, c), u * v * s)
    return LieTensor(alg, 3, out)


def ad_invariance_defect(t: LieTensor, check_labels: Iterable[str] = None) -> Dict[str, LieTensor]:
    """
    (ad_X⊗1 + 1⊗ad_X)(t) for each X in the check set.

    The check set defaults to the Heisenberg part 𝔥 of the algebra; for a
    tensor over 𝔥̃ the grading element d is excluded.
    """
    labels = list(check_labels) if check_labels is not None else list(t.algebra.core_labels)
    return {lab: ad_action(LieTensor.basis(t.algebra, lab), t) for lab in labels}


# ═══════════════════════════════════════════════════════════════
# COBRACKET AND DUAL BRACKET
# ═══════════════════════════════════════════════════════════════

def delta_cocycle(label: str, r: LieTensor) -> LieTensor:
    """δ(X) = ad_X(r) for a basis label X of the algebra r lives on."""
    return ad_action(LieTensor.basis(r.algebra, label), r)


def cocycle_law_defect(r: LieTensor) -> Dict[Tuple[str, str], LieTensor]:
    """
    δ([X,Y]) - ad_X δ(Y) + ad_Y δ(X) on all basis pairs of 𝔥.

    All entries vanish exactly when δ is a 1-cocycle.
    """
    alg = r.algebra
    deltas = {lab: delta_cocycle(lab, r) for lab in alg.labels}
    out = {}
    core = list(alg.core_labels)
    for a in range(len(core)):
        for b in range(a + 1, len(core)):
            X, Y = core[a], core[b]
            XY = bracket(LieTensor.basis(alg, X), LieTensor.basis(alg, Y))
            lhs = LieTensor.zero(alg, 2)
            for (k,), c in XY.items():
                lhs = lhs + c * deltas[alg.labels[k]]
            rhs = ad_action(LieTensor.basis(alg, X), deltas[Y]) - ad_action(LieTensor.basis(alg, Y), deltas[X])
            out[(X, Y)] = lhs - rhs
    return out


def _dual_algebra(r: LieTensor, extended: bool) -> LieAlgebraSpec:
    lam = r.algebra.lam
    if extended:
        return extended_dual_g(r.algebra.n, lam)
    return dual_g(r.algebra.n, lam)


def dual_bracket_from_delta(mu: str, nu: str, r: LieTensor, extended: bool = False) -> LieTensor:
    """
    [μ, ν] in 𝔤 (or 𝔤̃) reconstructed from δ by pairing.

    Args:
        mu, nu: Labels of the dual algebra ('p1', 'q1', 'r', 's')
        r: Classical r-matrix over 𝔥̃
        extended: Pair against all of 𝔥̃ (𝔤̃) instead of 𝔥 (𝔤)
    """
    src = r.algebra
    dual = _dual_algebra(r, extended)
    src_labels = list(src.labels) if extended else list(src.core_labels)
    to_src = {dual_label(lab): lab for lab in src_labels}
    a = src.index(to_src[mu])
    b = src.index(to_src[nu])
    out = {}
    for lab in src_labels:
        c = delta_cocycle(lab, r).coeffs.get((a, b), 0)
        if c != 0:
            out[(dual.index(dual_label(lab)),)] = c
    return LieTensor(dual, 1, out)


def dual_bracket_defects(r: LieTensor, extended: bool = False) -> Dict[Tuple[str, str], LieTensor]:
    """Difference between the reconstructed and the declared dual bracket, all pairs."""
    dual = _dual_algebra(r, extended)
    out = {}
    for i, mu in enumerate(dual.labels):
        for nu in dual.labels[i + 1:]:
            declared = bracket(LieTensor.basis(dual, mu), LieTensor.basis(dual, nu))
            out[(mu, nu)] = dual_bracket_from_delta(mu, nu, r, extended) - declared
    return out


# ═══════════════════════════════════════════════════════════════
# THETA AND THE GROUP COCYCLE
# ═══════════════════════════════════════════════════════════════

def theta(mu: str, n: int = 1, lam=LAM) -> LieTensor:
    """θ(μ) ∈ 𝔤⊗𝔤 with θ(μ)^{ab} = c_ab^{μ} from the bracket of 𝔥."""
    h = heisenberg(n)
    g = dual_g(n, lam)
    k = g.index(mu)
    out = {}
    for a in range(h.dim):
        for b in range(h.dim):
            c = h.structure_constant(a, b, k)
            if c != 0:
                out[(a, b)] = c
    return LieTensor(g, 2, out)


def pairing(t: LieTensor, labels: Tuple[str, ...]) -> sympy.Expr:
    """⟨t, X₁⊗...⊗X_k⟩ for basis vectors of 𝔥 given by label."""
    return t[tuple(dual_label(l) for l in labels)]


def theta_pairing_defects(n: int = 1) -> List[Tuple[str, str, str, sympy.Expr]]:
    """⟨θ(μ), X⊗Y⟩ - ⟨μ, [X,Y]⟩ over all basis triples; only nonzero ones returned."""
    h = heisenberg(n)
    g = dual_g(n)
    bad = []
    for mu in g.labels:
        th = theta(mu, n)
        for X in h.labels:
            for Y in h.labels:
                XY = bracket(LieTensor.basis(h, X), LieTensor.basis(h, Y))
                rhs = XY.coeffs.get((g.index(mu),), 0)
                lhs = pairing(th, (X, Y))
                d = sympy.expand(lhs - rhs)
                if d != 0:
                    bad.append((mu, X, Y, d))
    return bad


def sum_p_wedge_q(n: int, lam=LAM) -> LieTensor:
    g = dual_g(n, lam)
    total = LieTensor.zero(g, 2)
    for i in range(1, n + 1):
        total = total + wedge(LieTensor.basis(g, f"p{i}"), LieTensor.basis(g, f"q{i}"))
    return total


def group_cocycle_F(r_val: float, lam: float, n: int = 1) -> LieTensor:
    """F(r) = ((1 - e^{-2λr})/(2λ)) Σ p_i∧q_i with a float coefficient."""
    if lam == 0:
        raise ValueError("group_cocycle_F requires lambda != 0")
    coef = -np.expm1(-2.0 * lam * r_val) / (2.0 * lam)
    return sympy.Float(coef, 17) * sum_p_wedge_q(n)


def cocycle_F_defect(r1: float, r2: float, lam: float, n: int = 1) -> float:
    """Relative |F(r₁+r₂) - F(r₁) - e^{-2λr₁}F(r₂)|."""
    lhs = group_cocycle_F(r1 + r2, lam, n).to_numpy()
    rhs = group_cocycle_F(r1, lam, n).to_numpy() + np.exp(-2.0 * lam * r1) * group_cocycle_F(r2, lam, n).to_numpy()
    scale = max(np.max(np.abs(lhs)), np.max(np.abs(rhs)), 1.0)
    return float(np.max(np.abs(lhs - rhs)) / scale)


def group_cocycle_F_derivative(r_val: float, lam: float, n: int = 1, h: float = 1e-6) -> np.ndarray:
    """Central-difference dF/dr at r_val, as a dense array over 𝔤⊗𝔤."""
    return (group_cocycle_F(r_val + h, lam, n).to_numpy() - group_cocycle_F(r_val - h, lam, n).to_numpy()) / (2 * h)


# ═══════════════════════════════════════════════════════════════
# JSON
# ═══════════════════════════════════════════════════════════════

def _encode_coefficient(c: sympy.Expr) -> List[List[int]]:
    """Polynomial in λ → [[power, numerator, denominator], ...]."""
    poly = sympy.Poly(sympy.expand(c), LAM)
    out = []
    for (power,), coef in sorted(poly.terms()):
        coef = sympy.Rational(coef)
        out.append([int(power), int(coef.p), int(coef.q)])
    return out


def _decode_coefficient(terms: List[List[int]]) -> sympy.Expr:
    return sum((sympy.Rational(num, den) * LAM ** power for power, num, den in terms), sympy.Integer(0))


def tensor_to_json(t: LieTensor) -> str:
    """Serialize an exact tensor: basis labels plus sparse exact coefficients."""
    doc = {
        "algebra": t.algebra.name,
        "n": t.algebra.n,
        "labels": list(t.algebra.labels),
        "order": t.order,
        "entries": [
            {"index": list(idx), "coefficient": _encode_coefficient(c)}
            for idx, c in sorted(t.coeffs.items())
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True)


_ALGEBRAS = {
    "h": heisenberg,
    "h_ext": extended_heisenberg,
    "g": dual_g,
    "g_ext": extended_dual_g,
}


def tensor_from_json(text: str) -> LieTensor:
    doc = json.loads(text)
    alg = _ALGEBRAS[doc["algebra"]](doc["n"])
    coeffs = {tuple(e["index"]): _decode_coefficient(e["coefficient"]) for e in doc["entries"]}
    return LieTensor(alg, doc["order"], coeffs)


def algebra_to_json(alg: LieAlgebraSpec) -> str:
    """Structure constants as {labels, constants: [[i, j, k, coefficient], ...]}."""
    rows = []
    for (i, j), out in sorted(alg.brackets.items()):
        for k, c in sorted(out.items()):
            rows.append([i, j, k, _encode_coefficient(c)])
    return json.dumps({"algebra": alg.name, "n": alg.n, "labels": list(alg.labels), "constants": rows},
                      indent=2, sort_keys=True)
