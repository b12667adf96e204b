"""Hurwitz-Radon numbers, orthogonal multiplications and vector fields on spheres.

Everything is built from the integer real model of ``C(r,s)``: the images of
``1, v1-, v2-, ...`` (and ``J-`` when needed) are orthogonal matrices that
pairwise anticommute up to transpose, which is all a norm-multiplicative
bilinear map needs.
"""
from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from cck_config import get_config
from clifford_core import Signature, v_k_mask
from clifford_morphisms import build_real_rep
from exact_linalg import determinant, format_rational, matrix_rank, to_fraction

logger = logging.getLogger(__name__)

Vector = Tuple[Fraction, ...]
IntMatrix = np.ndarray


class HurwitzRadonError(ValueError):
    """Raised when a requested multiplication or field system cannot exist."""


@dataclass(frozen=True)
class HurwitzDecomposition:
    q: int
    u: int
    alpha: int
    beta: int

    @property
    def rho(self) -> int:
        return 8 * self.alpha + 2 ** self.beta

    @property
    def two_power(self) -> int:
        return 2 ** (4 * self.alpha + self.beta)

    @property
    def clifford_signature(self) -> Tuple[int, int]:
        """``(r, s)`` whose real model has size ``2^(4α+β)``."""

        if self.beta <= 2:
            return self.beta, 8 * self.alpha + self.beta
        return 0, 8 * self.alpha + 6


def hurwitz_decomposition(q: int) -> HurwitzDecomposition:
    if q < 1:
        raise HurwitzRadonError(f"q must be a positive integer, got {q}")
    k = 0
    u = q
    while u % 2 == 0:
        u //= 2
        k += 1
    return HurwitzDecomposition(q=q, u=u, alpha=k // 4, beta=k % 4)


def rho(q: int) -> Union[int, float]:
    """Hurwitz-Radon number; ``rho(0)`` is infinite."""

    if q == 0:
        return math.inf
    return hurwitz_decomposition(q).rho


# ---------------------------------------------------------------------------
# Orthogonal multiplications
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class OrthogonalMultiplication:
    """``f(v, w) = Σ vᵢ Aᵢ w`` with ``‖f(v,w)‖ = ‖v‖‖w‖``."""

    q: int
    matrices: Tuple[IntMatrix, ...]

    @property
    def p(self) -> int:
        return len(self.matrices)

    def verify(self) -> bool:
        """``AᵢᵀAⱼ + AⱼᵀAᵢ = 2δᵢⱼI`` in integer arithmetic."""

        identity = np.eye(self.q, dtype=np.int64)
        for i, a in enumerate(self.matrices):
            for j in range(i, self.p):
                b = self.matrices[j]
                expected = 2 * identity if i == j else 0 * identity
                if not np.array_equal(a.T @ b + b.T @ a, expected):
                    logger.debug("Orthogonality fails for slots %d, %d (q=%d)", i, j, self.q)
                    return False
        return True

    def __call__(self, v: Sequence[object], w: Sequence[object]) -> Vector:
        if len(v) != self.p or len(w) != self.q:
            raise HurwitzRadonError(f"Expected v in R^{self.p} and w in R^{self.q}")
        vs = [to_fraction(x) for x in v]
        ws = [to_fraction(x) for x in w]
        out = [Fraction(0)] * self.q
        for coeff, matrix in zip(vs, self.matrices):
            if coeff == 0:
                continue
            for row in range(self.q):
                out[row] += coeff * sum(
                    (int(matrix[row, col]) * ws[col] for col in range(self.q) if matrix[row, col]),
                    Fraction(0),
                )
        return tuple(out)

    def truncated(self, count: int) -> "OrthogonalMultiplication":
        return OrthogonalMultiplication(self.q, self.matrices[:count])

    def as_dump(self) -> Dict[str, object]:
        return {
            "q": self.q,
            "rho": rho(self.q),
            "matrices": [[[int(x) for x in row] for row in m] for m in self.matrices],
        }


def _clifford_slot_masks(decomp: HurwitzDecomposition) -> Tuple[Signature, List[int]]:
    r, s = decomp.clifford_signature
    sig = Signature(r, s)
    masks = [0] + [sig.generator_mask("-", i) for i in range(1, s + 1)]
    if decomp.beta >= 2:
        masks.append(v_k_mask(sig, 0, s))
    return sig, masks


def construction_data(q: int) -> Dict[str, Any]:
    """The ``C(r,s)`` model behind the ``ρ(q)`` slots: ``R^q = R^u ⊗ R^(2^(4α+β))``."""

    decomp = hurwitz_decomposition(q)
    sig, masks = _clifford_slot_masks(decomp)
    return {
        "r": sig.p,
        "s": sig.q,
        "alpha": decomp.alpha,
        "beta": decomp.beta,
        "model_size": decomp.two_power,
        "multiplicity": decomp.u,
        "slot_masks": masks,
    }


def build_orthogonal_multiplication(q: int) -> OrthogonalMultiplication:
    """``ρ(q)`` integer q×q matrices ``A₀ = I, A₁, ...`` of an orthogonal multiplication."""

    decomp = hurwitz_decomposition(q)
    sig, masks = _clifford_slot_masks(decomp)
    algebra = build_real_rep(sig)
    if algebra.size != decomp.two_power:
        raise HurwitzRadonError(
            f"Real model of C{sig} has size {algebra.size}, expected {decomp.two_power}"
        )
    inflate = np.eye(decomp.u, dtype=np.int64)
    matrices = tuple(np.kron(inflate, algebra.blade_image(mask)) for mask in masks)
    multiplication = OrthogonalMultiplication(q, matrices)
    if not multiplication.verify():
        raise HurwitzRadonError(f"Slot images of C{sig} fail the orthogonality identities")
    logger.debug("Built %d-slot orthogonal multiplication on R^%d from C%s", multiplication.p, q, sig)
    return multiplication


def _require_slots(p_plus_1: int, q: int) -> None:
    bound = rho(q)
    if p_plus_1 > bound:
        raise HurwitzRadonError(
            f"No norm-multiplicative R^{p_plus_1} x R^{q} -> R^{q}: {p_plus_1} > rho({q}) = {bound} (Adams bound)"
        )


def bilinear_map(p_plus_1: int, q: int) -> OrthogonalMultiplication:
    if p_plus_1 < 1:
        raise HurwitzRadonError(f"Need at least one slot, got {p_plus_1}")
    _require_slots(p_plus_1, q)
    return build_orthogonal_multiplication(q).truncated(p_plus_1)


# ---------------------------------------------------------------------------
# Sums of squares
# ---------------------------------------------------------------------------


@dataclass
class SumOfSquaresCertificate:
    x: Tuple[sympy.Symbol, ...]
    y: Tuple[sympy.Symbol, ...]
    z: Tuple[sympy.Poly, ...]

    def verify(self) -> bool:
        lhs = sum(s**2 for s in self.x) * sum(s**2 for s in self.y)
        rhs = sum(z.as_expr() ** 2 for z in self.z)
        return sympy.expand(lhs - rhs) == 0

    def render(self) -> str:
        left = f"({' + '.join(f'{s}^2' for s in self.x)})*({' + '.join(f'{s}^2' for s in self.y)})"
        right = " + ".join(f"({z.as_expr()})^2" for z in self.z)
        return f"{left} = {right}"

    def __str__(self) -> str:
        return self.render()


def sum_of_squares_identity(p_plus_1: int, q: int) -> SumOfSquaresCertificate:
    multiplication = bilinear_map(p_plus_1, q)
    x = sympy.symbols(f"x1:{p_plus_1 + 1}")
    y = sympy.symbols(f"y1:{q + 1}")
    z = []
    for row in range(q):
        expr = sum(
            int(matrix[row, col]) * x[i] * y[col]
            for i, matrix in enumerate(multiplication.matrices)
            for col in range(q)
            if matrix[row, col]
        )
        z.append(sympy.Poly(expr, *x, *y))
    certificate = SumOfSquaresCertificate(tuple(x), tuple(y), tuple(z))
    if not certificate.verify():
        raise HurwitzRadonError(f"Sum-of-squares identity failed for ({p_plus_1}, {q})")
    return certificate


# ---------------------------------------------------------------------------
# Vector fields on spheres
# ---------------------------------------------------------------------------


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def gram_determinant(vectors: Sequence[Sequence[object]]) -> Fraction:
    rows = [[to_fraction(x) for x in v] for v in vectors]
    gram = [[_dot(a, b) for b in rows] for a in rows]
    return determinant(gram)


def rational_sphere_point(q: int, rng: Optional[random.Random] = None, height: int = 9) -> Vector:
    """Exact point of ``S^(q-1)`` by inverse stereographic projection of a random rational point."""

    if q < 1:
        raise HurwitzRadonError(f"S^{q - 1} has no points")
    rng = rng or random.Random(get_config().seed)
    if q == 1:
        return (Fraction(rng.choice((-1, 1))),)
    u = [Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(q - 1)]
    norm = _dot(u, u)
    scale = 1 + norm
    return tuple(2 * x / scale for x in u) + ((norm - 1) / scale,)


@dataclass
class SphereVectorFields:
    """``Z_i(w) = t_i(w) - <t_i(w), w> w`` with ``t_i(w) = A₀⁻¹ Aᵢ w``."""

    q: int
    p: int
    multiplication: OrthogonalMultiplication

    def evaluate(self, w: Sequence[object]) -> List[Vector]:
        point = tuple(to_fraction(x) for x in w)
        if len(point) != self.q:
            raise HurwitzRadonError(f"Expected a point of R^{self.q}, got {len(point)} coordinates")
        base = self.multiplication.matrices[0]
        fields: List[Vector] = []
        for i in range(1, self.p + 1):
            slot = [Fraction(int(i == j)) for j in range(self.multiplication.p)]
            image = self.multiplication(slot, point)
            # A₀ is orthogonal, so A₀⁻¹ = A₀ᵀ.
            t = tuple(
                sum((int(base[row, col]) * image[row] for row in range(self.q) if base[row, col]), Fraction(0))
                for col in range(self.q)
            )
            shift = _dot(t, point)
            fields.append(tuple(t_k - shift * w_k for t_k, w_k in zip(t, point)))
        return fields

    __call__ = evaluate

    def independent_at(self, w: Sequence[object]) -> bool:
        point = tuple(to_fraction(x) for x in w)
        return gram_determinant([point, *self.evaluate(point)]) != 0


def vector_fields_on_sphere(q: int, p: int) -> SphereVectorFields:
    if p < 0:
        raise HurwitzRadonError(f"Field count must be non-negative, got {p}")
    if p >= rho(q):
        raise HurwitzRadonError(
            f"S^{q - 1} has no {p} independent vector fields: p >= rho({q}) = {rho(q)} (Adams bound)"
        )
    return SphereVectorFields(q=q, p=p, multiplication=bilinear_map(p + 1, q))


# ---------------------------------------------------------------------------
# W = f̃(R^q) and its properness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WSubspace:
    """``W = {f̃(w)}`` in ``M(rows, cols)``, given by the images of the basis vectors of R^dim."""

    rows: int
    cols: int
    basis: Tuple[Tuple[Tuple[Fraction, ...], ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def at(self, w: Sequence[object]) -> List[List[Fraction]]:
        coeffs = [to_fraction(x) for x in w]
        if len(coeffs) != self.dim:
            raise HurwitzRadonError(f"Expected {self.dim} coordinates, got {len(coeffs)}")
        return [
            [sum((c * b[r][k] for c, b in zip(coeffs, self.basis)), Fraction(0)) for k in range(self.cols)]
            for r in range(self.rows)
        ]


def subspace_from_bilinear(f: Union[OrthogonalMultiplication, Sequence[Sequence[Sequence[object]]]]) -> WSubspace:
    """``f̃(e_k)`` has columns ``f(e_i, e_k)``, i.e. the k-th columns of the slot matrices."""

    matrices = f.matrices if isinstance(f, OrthogonalMultiplication) else f
    arrays = [[[to_fraction(x) for x in row] for row in m] for m in matrices]
    if not arrays:
        raise HurwitzRadonError("A bilinear map needs at least one slot")
    q = len(arrays[0])
    for m in arrays:
        if len(m) != q or any(len(row) != q for row in m):
            raise HurwitzRadonError(f"Slot matrices must all be {q}x{q}")
    basis = tuple(
        tuple(tuple(m[r][k] for m in arrays) for r in range(q)) for k in range(q)
    )
    return WSubspace(rows=q, cols=len(arrays), basis=basis)


@dataclass(frozen=True)
class PropernessReport:
    proper: bool
    method: str
    witness: Optional[Vector] = None

    @property
    def sampled(self) -> bool:
        return self.method == "sampled"


def _transpose_product(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    return [
        [sum((a[r][i] * b[r][j] for r in range(len(a))), Fraction(0)) for j in range(len(b[0]))]
        for i in range(len(a[0]))
    ]


def norm_identity_holds(W: WSubspace) -> bool:
    """``f̃(w)ᵀf̃(w) = ‖w‖² I`` as a polynomial identity."""

    for k, bk in enumerate(W.basis):
        for l in range(k, W.dim):
            bl = W.basis[l]
            prod = _transpose_product(bk, bl)
            if k == l:
                if any(prod[i][j] != int(i == j) for i in range(W.cols) for j in range(W.cols)):
                    return False
            else:
                back = _transpose_product(bl, bk)
                if any(prod[i][j] + back[i][j] != 0 for i in range(W.cols) for j in range(W.cols)):
                    return False
    return True


def properness_report(W: WSubspace, rng: Optional[random.Random] = None, samples: int = 200) -> PropernessReport:
    """Decide whether every ``f̃(w)``, ``w ≠ 0``, is injective on ``R^cols``."""

    if W.dim == 0:
        return PropernessReport(True, "exact")
    if norm_identity_holds(W):
        return PropernessReport(True, "identity")
    if W.cols > W.rows:
        return PropernessReport(False, "dimension")
    w = sympy.symbols(f"w1:{W.dim + 1}")
    generic = sympy.Matrix(
        [[sum(sympy.Rational(b[r][k].numerator, b[r][k].denominator) * wi for wi, b in zip(w, W.basis))
          for k in range(W.cols)] for r in range(W.rows)]
    )
    gram_det = sympy.expand((generic.T * generic).det(method="berkowitz"))
    if gram_det == 0:
        return PropernessReport(False, "generic-rank")
    if W.dim == 1:
        return PropernessReport(True, "exact")
    if W.dim == 2:
        if gram_det.subs({w[0]: 0, w[1]: 1}) == 0:
            return PropernessReport(False, "exact", (Fraction(0), Fraction(1)))
        t = sympy.Symbol("t")
        binary = sympy.Poly(gram_det.subs({w[0]: 1, w[1]: t}), t)
        real_roots = binary.count_roots() if binary.degree() > 0 else 0
        return PropernessReport(real_roots == 0, "exact")
    rng = rng or random.Random(get_config().seed)
    for _ in range(samples):
        point = rational_sphere_point(W.dim, rng)
        matrix = W.at(point)
        if matrix_rank(matrix) < W.cols:
            return PropernessReport(False, "exact", point)
    logger.warning("Properness of a %d-dimensional W decided by %d samples only", W.dim, samples)
    return PropernessReport(True, "sampled")


def check_W_proper(W: WSubspace, rng: Optional[random.Random] = None) -> bool:
    return properness_report(W, rng).proper


# ---------------------------------------------------------------------------
# The equivalence chain
# ---------------------------------------------------------------------------


@dataclass
class ExistenceChain:
    p: int
    q: int
    rho: Union[int, float]
    bilinear: bool
    vector_fields: bool
    w_proper: bool
    failed: List[str] = field(default_factory=list)
    note: str = ""

    @property
    def consistent(self) -> bool:
        return self.bilinear == self.vector_fields == self.w_proper


def existence_chain(p: int, q: int, points: int = 5, seed: Optional[int] = None) -> ExistenceChain:
    """Run the bilinear-map, vector-field and proper-W conditions side by side."""

    bound = rho(q)
    if p + 1 > bound:
        note = f"p+1 = {p + 1} > rho({q}) = {bound}; non-existence by the Adams bound"
        return ExistenceChain(p, q, bound, False, False, False,
                              ["bilinear_map", "vector_fields", "proper_W"], note)
    rng = random.Random(get_config().seed if seed is None else seed)
    multiplication = bilinear_map(p + 1, q)
    failed: List[str] = []
    bilinear_ok = multiplication.verify()
    if not bilinear_ok:
        failed.append("bilinear_map")
    fields = vector_fields_on_sphere(q, p)
    fields_ok = all(fields.independent_at(rational_sphere_point(q, rng)) for _ in range(points))
    if not fields_ok:
        failed.append("vector_fields")
    proper_ok = check_W_proper(subspace_from_bilinear(multiplication), rng)
    if not proper_ok:
        failed.append("proper_W")
    return ExistenceChain(p, q, bound, bilinear_ok, fields_ok, proper_ok, failed,
                          f"p+1 = {p + 1} <= rho({q}) = {bound}")


def format_vector(v: Sequence[Fraction]) -> str:
    return "(" + ", ".join(format_rational(x) for x in v) + ")"
