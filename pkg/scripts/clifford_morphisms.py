"""Isomorphisms between Clifford algebras, their classification and real matrix models.

The tower is built from the base maps ``ψ`` and the families ``φ_K``, ``λ_K``,
``η_K`` and ``ξ_L``.  Every morphism is determined by its generator images and
can be checked against the Clifford relations exactly.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import lcm
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from cck_config import get_config
from clifford_core import (
    CliffordDomainError,
    InnerAutomorphism,
    MultiVector,
    Signature,
    blade_label,
    blade_product,
    lie_algebra_basis_g,
    d_by_blades,
    aut_j_lie_basis,
    popcount,
    reversion_sign,
    star_conjugation,
    v_k_mask,
)
from exact_linalg import certify_full_rank, format_rational, to_fraction, to_rational

logger = logging.getLogger(__name__)


class MorphismError(ValueError):
    """Raised when a morphism's hypotheses fail or its relations do not hold."""


class RepresentationSizeError(MemoryError):
    """Raised when a matrix model would exceed the configured size cap."""


# ---------------------------------------------------------------------------
# Tensor products of Clifford algebras
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TensorSignature:
    factors: Tuple[Signature, ...]

    @property
    def dim(self) -> int:
        return reduce(lambda acc, s: acc * s.dim, self.factors, 1)

    def __str__(self) -> str:
        return "⊗".join(f"C{s}" for s in self.factors)


class TensorVector:
    """Element of ``C(X)⊗C(Y)⊗...``: tuple of blade masks -> rational."""

    __slots__ = ("tsig", "_terms")

    def __init__(self, tsig: TensorSignature, terms: Optional[Dict[Tuple[int, ...], Any]] = None) -> None:
        self.tsig = tsig
        cleaned: Dict[Tuple[int, ...], Fraction] = {}
        for key, coeff in (terms or {}).items():
            value = to_fraction(coeff)
            if value != 0:
                cleaned[tuple(key)] = value
        self._terms = cleaned

    @classmethod
    def one(cls, tsig: TensorSignature) -> "TensorVector":
        return cls(tsig, {tuple(0 for _ in tsig.factors): 1})

    @classmethod
    def pure(cls, tsig: TensorSignature, parts: Sequence[MultiVector]) -> "TensorVector":
        """``parts[0] ⊗ parts[1] ⊗ ...``."""

        if len(parts) != len(tsig.factors):
            raise MorphismError(f"Expected {len(tsig.factors)} tensor factors, got {len(parts)}")
        terms: Dict[Tuple[int, ...], Fraction] = {(): Fraction(1)}
        for part, sig in zip(parts, tsig.factors):
            if part.sig != sig:
                raise MorphismError(f"Factor C{part.sig} does not match C{sig}")
            terms = {
                key + (mask,): coeff * c for key, coeff in terms.items() for mask, c in part.items()
            }
        return cls(tsig, terms)

    def items(self) -> List[Tuple[Tuple[int, ...], Fraction]]:
        return sorted(self._terms.items())

    def _coerce(self, other: object) -> "TensorVector":
        if isinstance(other, TensorVector):
            if other.tsig != self.tsig:
                raise MorphismError(f"Tensor mismatch: {self.tsig} vs {other.tsig}")
            return other
        if isinstance(other, (int, Fraction)):
            return TensorVector.one(self.tsig) * other
        raise TypeError(f"Cannot combine TensorVector with {type(other).__name__}")

    def __add__(self, other: object) -> "TensorVector":
        rhs = self._coerce(other)
        terms = dict(self._terms)
        for key, coeff in rhs._terms.items():
            terms[key] = terms.get(key, Fraction(0)) + coeff
        return TensorVector(self.tsig, terms)

    __radd__ = __add__

    def __neg__(self) -> "TensorVector":
        return TensorVector(self.tsig, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: object) -> "TensorVector":
        return self + (-self._coerce(other))

    def __mul__(self, other: object) -> "TensorVector":
        if isinstance(other, (int, Fraction)):
            value = to_fraction(other)
            return TensorVector(self.tsig, {k: c * value for k, c in self._terms.items()})
        rhs = self._coerce(other)
        out: Dict[Tuple[int, ...], Fraction] = {}
        for ka, ca in self._terms.items():
            for kb, cb in rhs._terms.items():
                sign = 1
                key = []
                for sig, ma, mb in zip(self.tsig.factors, ka, kb):
                    s, m = blade_product(sig, ma, mb)
                    sign *= s
                    key.append(m)
                out[tuple(key)] = out.get(tuple(key), Fraction(0)) + sign * ca * cb
        return TensorVector(self.tsig, out)

    def __rmul__(self, other: object) -> "TensorVector":
        if isinstance(other, (int, Fraction)):
            return self * other
        return self._coerce(other) * self

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self._terms == (TensorVector.one(self.tsig) * other)._terms
        if not isinstance(other, TensorVector):
            return NotImplemented
        return self.tsig == other.tsig and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.tsig, tuple(self.items())))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def star(self) -> "TensorVector":
        out = {}
        for key, coeff in self._terms.items():
            sign = 1
            for sig, mask in zip(self.tsig.factors, key):
                sign *= reversion_sign(mask) * (-1 if popcount(mask & sig.minus_mask) & 1 else 1)
            out[key] = coeff * sign
        return TensorVector(self.tsig, out)

    def coordinates(self) -> List[Fraction]:
        coords = [Fraction(0)] * self.tsig.dim
        for key, coeff in self._terms.items():
            index = 0
            for sig, mask in zip(self.tsig.factors, key):
                index = index * sig.dim + mask
            coords[index] = coeff
        return coords

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for key, coeff in self.items():
            body = "⊗".join(blade_label(sig, m) for sig, m in zip(self.tsig.factors, key))
            if coeff == 1:
                pieces.append(f"+ {body}")
            elif coeff == -1:
                pieces.append(f"- {body}")
            else:
                sign = "-" if coeff < 0 else "+"
                pieces.append(f"{sign} {format_rational(abs(coeff))}*{body}")
        text = " ".join(pieces)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    __repr__ = __str__


@dataclass(frozen=True)
class TensorAutomorphism:
    """Diagonal automorphism of a tensor product: one flip mask per factor."""

    tsig: TensorSignature
    flips: Tuple[int, ...]
    label: str = ""

    @classmethod
    def id_tensor_tau(cls, tsig: TensorSignature, slot: int = -1) -> "TensorAutomorphism":
        """``id ⊗ ... ⊗ τ₁^±`` acting on the first generator of ``slot``."""

        flips = [0] * len(tsig.factors)
        flips[slot] = 1
        return cls(tsig, tuple(flips), label="id⊗tau_1")

    def __call__(self, x: TensorVector) -> TensorVector:
        out = {}
        for key, coeff in x._terms.items():
            sign = 1
            for mask, flip in zip(key, self.flips):
                if popcount(mask & flip) & 1:
                    sign = -sign
            out[key] = coeff * sign
        return TensorVector(x.tsig, out)


# ---------------------------------------------------------------------------
# Real matrix models
# ---------------------------------------------------------------------------

# Base matrices of the ψ maps.
PLUS_2 = np.array([[1, 0], [0, -1]], dtype=np.int64)
MINUS_2 = np.array([[0, -1], [1, 0]], dtype=np.int64)
SWAP_2 = np.array([[0, 1], [1, 0]], dtype=np.int64)
PLUS_MINUS_2 = PLUS_2 @ MINUS_2
QUATERNION_I = np.array(
    [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=np.int64
)
QUATERNION_J = np.array(
    [[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=np.int64
)

MatrixLike = np.ndarray


@dataclass(eq=False)
class MatrixAlgebra:
    """Real model of C(p,q): integer generator matrices plus the symbolic type."""

    sig: Signature
    ground: str
    n: int
    double: bool
    generators: Tuple[np.ndarray, ...]
    _blade_cache: Dict[int, np.ndarray] = field(default_factory=dict, repr=False, compare=False)

    @property
    def size(self) -> int:
        return int(self.generators[0].shape[0]) if self.generators else 1

    def blade_image(self, mask: int) -> np.ndarray:
        cached = self._blade_cache.get(mask)
        if cached is not None:
            return cached
        if mask == 0:
            image = np.eye(self.size, dtype=np.int64)
        else:
            top = mask.bit_length() - 1
            image = self.blade_image(mask & ~(1 << top)) @ self.generators[top]
        self._blade_cache[mask] = image
        return image

    def represent(self, a: MultiVector) -> sympy.Matrix:
        """Exact image of ``a`` as a sympy matrix."""

        if a.sig != self.sig:
            raise CliffordDomainError(f"Signature mismatch: C{a.sig} vs C{self.sig}")
        result = sympy.zeros(self.size, self.size)
        for mask, coeff in a.items():
            result += sympy.Matrix(self.blade_image(mask).tolist()) * to_rational(coeff)
        return result

    def check_relations(self) -> bool:
        identity = np.eye(self.size, dtype=np.int64)
        for i, gi in enumerate(self.generators):
            sign = self.sig.generator_square(i)
            if not np.array_equal(gi @ gi, sign * identity):
                return False
            for gj in self.generators[i + 1 :]:
                if np.any(gi @ gj + gj @ gi):
                    return False
        return True

    def check_star_transpose(self) -> bool:
        """Generator images satisfy ``ι(g*) = ι(g)ᵀ``."""

        for i, gi in enumerate(self.generators):
            sign = self.sig.generator_square(i)
            if not np.array_equal(gi.T, sign * gi):
                return False
        return True

    def blade_images_independent(self) -> bool:
        """Exact certificate that the 2^(p+q) blade images are linearly independent."""

        size = self.size
        traces_vanish = all(
            int(np.trace(self.blade_image(mask))) == 0 for mask in range(1, self.sig.dim)
        )
        if traces_vanish:
            # Signed permutation images are orthogonal; zero traces give a diagonal Gram matrix.
            return True
        rows = np.stack([self.blade_image(mask).reshape(size * size) for mask in range(self.sig.dim)])
        return certify_full_rank(rows)

    def as_dump(self) -> Dict[str, Any]:
        return {
            "p": self.sig.p,
            "q": self.sig.q,
            "n": self.size,
            "ground": self.ground,
            "double": self.double,
            "generators": [[[int(x) for x in row] for row in g] for g in self.generators],
        }


# ---------------------------------------------------------------------------
# Algebra morphisms
# ---------------------------------------------------------------------------

Target = Union[Signature, TensorSignature, MatrixAlgebra]
Element = Union[MultiVector, TensorVector, np.ndarray]


def _target_one(target: Target) -> Element:
    if isinstance(target, Signature):
        return MultiVector.scalar(target)
    if isinstance(target, TensorSignature):
        return TensorVector.one(target)
    return np.eye(target.size, dtype=np.int64)


def _mul(x: Element, y: Element) -> Element:
    if isinstance(x, np.ndarray):
        return x @ y
    return x * y


def _equal(x: Element, y: Element) -> bool:
    if isinstance(x, np.ndarray) or isinstance(y, np.ndarray):
        return bool(np.array_equal(np.asarray(x), np.asarray(y)))
    return x == y


def _is_zero(x: Element) -> bool:
    if isinstance(x, np.ndarray):
        return not np.any(x != 0)
    return not x


def _scaled(x: Element, coeff: Fraction) -> Element:
    if isinstance(x, np.ndarray):
        return x.astype(object) * coeff
    return x * coeff


def _target_dim(target: Target) -> int:
    if isinstance(target, (Signature, TensorSignature)):
        return target.dim
    return target.size * target.size


def element_coordinates(x: Element) -> List[Fraction]:
    if isinstance(x, MultiVector):
        return [x.coefficient(m) for m in range(x.sig.dim)]
    if isinstance(x, TensorVector):
        return x.coordinates()
    return [to_fraction(v) for v in np.asarray(x).reshape(-1)]


def star_of(x: Element) -> Element:
    if isinstance(x, MultiVector):
        return star_conjugation(x)
    if isinstance(x, TensorVector):
        return x.star()
    return np.asarray(x).T


@dataclass(eq=False)
class AlgebraMorphism:
    """Algebra map out of C(p,q) fixed by the images of the generators."""

    source: Signature
    target: Target
    generator_images: Tuple[Element, ...]
    name: str = ""
    notes: Dict[str, Any] = field(default_factory=dict)
    _blade_cache: Dict[int, Element] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.generator_images) != self.source.n:
            raise MorphismError(
                f"{self.name}: expected {self.source.n} generator images, got {len(self.generator_images)}"
            )

    def image(self, mask: int) -> Element:
        cached = self._blade_cache.get(mask)
        if cached is not None:
            return cached
        if mask == 0:
            value = _target_one(self.target)
        else:
            top = mask.bit_length() - 1
            value = _mul(self.image(mask & ~(1 << top)), self.generator_images[top])
        self._blade_cache[mask] = value
        return value

    def apply(self, a: MultiVector) -> Element:
        if a.sig != self.source:
            raise MorphismError(f"{self.name}: expected an element of C{self.source}, got C{a.sig}")
        total: Optional[Element] = None
        for mask, coeff in a.items():
            term = _scaled(self.image(mask), coeff)
            total = term if total is None else total + term
        if total is None:
            return _scaled(_target_one(self.target), Fraction(0))
        return total

    def __call__(self, a: MultiVector) -> Element:
        return self.apply(a)

    def check_relations(self) -> bool:
        one = _target_one(self.target)
        for i, gi in enumerate(self.generator_images):
            sign = self.source.generator_square(i)
            square = _mul(gi, gi)
            expected = one if sign > 0 else _scaled(one, Fraction(-1))
            if not _equal(square, expected):
                logger.debug("%s: generator %d squares incorrectly", self.name, i)
                return False
            for gj in self.generator_images[i + 1 :]:
                if not _is_zero(_mul(gi, gj) + _mul(gj, gi)):
                    logger.debug("%s: generator %d fails anticommutation", self.name, i)
                    return False
        return True

    def is_bijective(self) -> bool:
        if _target_dim(self.target) < self.source.dim:
            return False
        if isinstance(self.target, MatrixAlgebra):
            return self.target.blade_images_independent()
        rows = [element_coordinates(self.image(mask)) for mask in range(self.source.dim)]
        scale = lcm(*(c.denominator for row in rows for c in row if c != 0)) if rows else 1
        integral = np.array([[int(c * scale) for c in row] for row in rows], dtype=np.int64)
        return certify_full_rank(integral)

    def compose(self, outer: "AlgebraMorphism") -> "AlgebraMorphism":
        """``outer ∘ self``."""

        if self.target != outer.source:
            raise MorphismError(f"Cannot compose {outer.name} after {self.name}: target/source mismatch")
        images = tuple(outer.apply(img) for img in self.generator_images)
        notes = {**self.notes, **outer.notes}
        return AlgebraMorphism(self.source, outer.target, images, name=f"{outer.name}∘{self.name}", notes=notes)

    def commutes_with(self, source_aut: Callable[[MultiVector], MultiVector], target_aut: Callable[[Element], Element]) -> bool:
        """``π ∘ σ = σ' ∘ π`` on every generator."""

        for mask in self.source.generator_masks():
            g = MultiVector.blade(self.source, mask)
            if not _equal(self.apply(source_aut(g)), target_aut(self.apply(g))):
                return False
        return True

    def is_star_compatible(self, masks: Optional[Iterable[int]] = None) -> bool:
        """``π(a*) = π(a)*`` on the given blades (default: generators)."""

        for mask in masks if masks is not None else self.source.generator_masks():
            a = MultiVector.blade(self.source, mask)
            if not _equal(self.apply(star_conjugation(a)), star_of(self.apply(a))):
                return False
        return True

    def transfer(self, aut: InnerAutomorphism) -> Union[InnerAutomorphism, TensorAutomorphism]:
        """The diagonal automorphism ``σ`` of the target with ``π ∘ aut = σ ∘ π``."""

        if aut.sig != self.source:
            raise MorphismError(f"{self.name}: automorphism acts on C{aut.sig}, not C{self.source}")
        if isinstance(self.target, MatrixAlgebra):
            raise MorphismError(f"{self.name}: matrix targets have no blade basis to be diagonal on")
        factors = self.target.factors if isinstance(self.target, TensorSignature) else (self.target,)
        offsets = [0]
        for sig in factors:
            offsets.append(offsets[-1] + sig.n)

        def packed(key: Union[int, Tuple[int, ...]]) -> int:
            parts = key if isinstance(key, tuple) else (key,)
            return sum(mask << offset for mask, offset in zip(parts, offsets))

        equations: List[Tuple[int, int]] = []
        for mask in self.source.generator_masks():
            g = MultiVector.blade(self.source, mask)
            before = dict(self.apply(g).items())
            after = dict(self.apply(aut(g)).items())
            if before.keys() != after.keys():
                raise MorphismError(f"{self.name}: transferred {aut.label} is not diagonal")
            for key, coeff in before.items():
                ratio = after[key] / coeff
                if ratio not in (1, -1):
                    raise MorphismError(f"{self.name}: transferred {aut.label} is not diagonal")
                equations.append((packed(key), int(ratio == -1)))
        flip = _solve_gf2(equations)
        if flip is None:
            raise MorphismError(f"{self.name}: transferred {aut.label} is not diagonal")
        label = f"transfer({aut.label})"
        if isinstance(self.target, Signature):
            return InnerAutomorphism.diagonal(self.target, flip, label=label)
        flips = tuple((flip >> offsets[i]) & factors[i].full_mask for i in range(len(factors)))
        return TensorAutomorphism(self.target, flips, label=label)

    def describe(self) -> List[str]:
        return [
            f"{blade_label(self.source, mask)} -> {img}"
            for mask, img in zip(self.source.generator_masks(), self.generator_images)
        ]


def _solve_gf2(equations: Sequence[Tuple[int, int]]) -> Optional[int]:
    """Some ``f`` with ``popcount(row & f) ≡ rhs (mod 2)`` for every equation, or None."""

    basis: List[Tuple[int, int]] = []
    for row, rhs in equations:
        for b_row, b_rhs in basis:
            if row >> (b_row.bit_length() - 1) & 1:
                row ^= b_row
                rhs ^= b_rhs
        if row == 0:
            if rhs:
                return None
            continue
        basis.append((row, rhs))
        basis.sort(key=lambda item: item[0].bit_length(), reverse=True)
    solution = 0
    for row, rhs in sorted(basis, key=lambda item: item[0].bit_length()):
        lead = 1 << (row.bit_length() - 1)
        if rhs ^ (popcount(row & solution & ~lead) & 1):
            solution |= lead
    return solution



def identity_morphism(sig: Signature) -> AlgebraMorphism:
    images = tuple(MultiVector.blade(sig, m) for m in sig.generator_masks())
    return AlgebraMorphism(sig, sig, images, name="id")


def automorphism_morphism(aut: InnerAutomorphism, name: str = "") -> AlgebraMorphism:
    images = tuple(aut(MultiVector.blade(aut.sig, m)) for m in aut.sig.generator_masks())
    return AlgebraMorphism(aut.sig, aut.sig, images, name=name or aut.label)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

_GROUND_BY_RESIDUE = {0: ("R", True, 1), 1: ("R", False, 0), 7: ("R", False, 0), 2: ("C", False, 1),
                      6: ("C", False, 1), 3: ("H", False, 2), 5: ("H", False, 2), 4: ("H", True, 3)}


@dataclass(frozen=True)
class CliffordClass:
    ground: str
    n: int
    double: bool
    alpha: int

    @property
    def label(self) -> str:
        body = self.ground if self.n == 1 else f"{self.ground}({self.n})"
        return body + ("²" if self.double else "")

    @property
    def matrix_label(self) -> str:
        single = self.ground if self.n == 1 else f"M({self.n},{self.ground})"
        return f"{single}⊕{single}" if self.double else single

    @property
    def real_dimension(self) -> int:
        field_dim = {"R": 1, "C": 2, "H": 4}[self.ground]
        return self.n * self.n * field_dim * (2 if self.double else 1)

    @property
    def real_model_size(self) -> int:
        field_dim = {"R": 1, "C": 2, "H": 4}[self.ground]
        return self.n * field_dim * (2 if self.double else 1)


def classify_clifford(sig: Signature) -> CliffordClass:
    residue = (sig.p - sig.q - 1) % 8
    ground, double, alpha = _GROUND_BY_RESIDUE[residue]
    return CliffordClass(ground=ground, n=2 ** ((sig.n - alpha) // 2), double=double, alpha=alpha)


CLIFFORD_TABLE: Tuple[Tuple[str, ...], ...] = (
    ("R", "C", "H", "H²", "H(2)", "C(4)", "R(8)", "R(8)²", "R(16)"),
    ("R²", "R(2)", "C(2)", "H(2)", "H(2)²", "H(4)", "C(8)", "R(16)", "R(16)²"),
    ("R(2)", "R(2)²", "R(4)", "C(4)", "H(4)", "H(4)²", "H(8)", "C(16)", "R(32)"),
    ("C(2)", "R(4)", "R(4)²", "R(8)", "C(8)", "H(8)", "H(8)²", "H(16)", "C(32)"),
    ("H(2)", "C(4)", "R(8)", "R(8)²", "R(16)", "C(16)", "H(16)", "H(16)²", "H(32)"),
    ("H(2)²", "H(4)", "C(8)", "R(16)", "R(16)²", "R(32)", "C(32)", "H(32)", "H(32)²"),
    ("H(4)", "H(4)²", "H(8)", "C(16)", "R(32)", "R(32)²", "R(64)", "C(64)", "H(64)"),
    ("C(8)", "H(8)", "H(8)²", "H(16)", "C(32)", "R(64)", "R(64)²", "R(128)", "C(128)"),
    ("R(16)", "C(16)", "H(16)", "H(16)²", "H(32)", "C(64)", "R(128)", "R(128)²", "R(256)"),
)

_GROUP_FAMILIES: Dict[str, Callable[[Fraction], str]] = {
    "O(n,n)": lambda n: f"O({n},{n})",
    "GL(2n,R)": lambda n: f"GL({2 * n},R)",
    "Sp(n,R)": lambda n: f"Sp({n},R)",
    "O(2n,C)": lambda n: f"O({2 * n},C)",
    "U(n,n)": lambda n: f"U({n},{n})",
    "Sp(n,C)": lambda n: f"Sp({n},C)",
    "O*(4n)": lambda n: f"O*({4 * n})",
    "Sp(n,n)": lambda n: f"Sp({n},{n})",
    "GL(2n,H)": lambda n: f"GL({2 * n},H)",
    "O(n)": lambda n: f"O({n})",
    "U(n)": lambda n: f"U({n})",
    "Sp(n)": lambda n: f"Sp({n})",
}

# (p - q mod 8) -> (alpha, {p + q mod 8 -> (family, squared)})
_GROUP_RULE: Dict[int, Tuple[int, Dict[int, Tuple[str, bool]]]] = {
    0: (4, {0: ("O(n,n)", True), 2: ("GL(2n,R)", False), 6: ("GL(2n,R)", False), 4: ("Sp(n,R)", True)}),
    1: (3, {1: ("O(n,n)", False), 7: ("O(n,n)", False), 3: ("Sp(n,R)", False), 5: ("Sp(n,R)", False)}),
    2: (4, {0: ("O(2n,C)", False), 2: ("U(n,n)", False), 6: ("U(n,n)", False), 4: ("Sp(n,C)", False)}),
    3: (5, {1: ("O*(4n)", False), 7: ("O*(4n)", False), 3: ("Sp(n,n)", False), 5: ("Sp(n,n)", False)}),
    4: (6, {0: ("O*(4n)", True), 2: ("GL(2n,H)", False), 6: ("GL(2n,H)", False), 4: ("Sp(n,n)", True)}),
}
_GROUP_RULE[7] = _GROUP_RULE[1]
_GROUP_RULE[6] = _GROUP_RULE[2]
_GROUP_RULE[5] = _GROUP_RULE[3]

_COMPACT_BY_GROUND = {"R": "O(n)", "C": "U(n)", "H": "Sp(n)"}


@dataclass(frozen=True)
class GroupClass:
    family: str
    n: Fraction
    squared: bool
    alpha: Optional[int] = None

    @property
    def label(self) -> str:
        body = _GROUP_FAMILIES[self.family](self.n)
        return body + ("²" if self.squared else "")

    def descriptor(self):
        from lie_descriptors import parse_group

        return parse_group(self.label)


def _n_from_alpha(total: int, alpha: int) -> Fraction:
    exponent = total - alpha
    if exponent % 2:
        raise MorphismError(f"p+q-α = {exponent} is odd")
    half = exponent // 2
    return Fraction(2) ** half


def classify_group(sig: Signature) -> GroupClass:
    """Classical group isomorphic to G(p,q)."""

    if sig.p == 0 or sig.q == 0:
        m = sig.p + sig.q
        if m == 0:
            return GroupClass("O(n)", Fraction(1), False)
        cls = classify_clifford(Signature(0, m - 1))
        return GroupClass(_COMPACT_BY_GROUND[cls.ground], Fraction(cls.n), cls.double)
    alpha, by_sum = _GROUP_RULE[(sig.p - sig.q) % 8]
    family, squared = by_sum[(sig.p + sig.q) % 8]
    n = _n_from_alpha(sig.n, alpha)
    if n.denominator != 1 and (2 * n).denominator != 1:
        raise MorphismError(f"Non-integral size {n} for G{sig}")
    return GroupClass(family, n, squared, alpha)


GROUP_TABLE: Tuple[Tuple[str, ...], ...] = (
    ("O(1)", "O(1)", "U(1)", "Sp(1)", "Sp(1)²", "Sp(2)", "U(4)", "O(8)", "O(8)²"),
    ("O(1)", "GL(1,R)", "Sp(1,R)", "Sp(1,C)", "Sp(1,1)", "GL(2,H)", "O*(8)", "O(8,C)", "O(8,8)"),
    ("U(1)", "Sp(1,R)", "Sp(1,R)²", "Sp(2,R)", "U(2,2)", "O*(8)", "O*(8)²", "O*(16)", "U(8,8)"),
    ("Sp(1)", "Sp(1,C)", "Sp(2,R)", "GL(4,R)", "O(4,4)", "O(8,C)", "O*(16)", "GL(8,H)", "Sp(8,8)"),
    ("Sp(1)²", "Sp(1,1)", "U(2,2)", "O(4,4)", "O(4,4)²", "O(8,8)", "U(8,8)", "Sp(8,8)", "Sp(8,8)²"),
    ("Sp(2)", "GL(2,H)", "O*(8)", "O(8,C)", "O(8,8)", "GL(16,R)", "Sp(16,R)", "Sp(16,C)", "Sp(16,16)"),
    ("U(4)", "O*(8)", "O*(8)²", "O*(16)", "U(8,8)", "Sp(16,R)", "Sp(16,R)²", "Sp(32,R)", "U(32,32)"),
    ("O(8)", "O(8,C)", "O*(16)", "GL(8,H)", "Sp(8,8)", "Sp(16,C)", "Sp(32,R)", "GL(64,R)", "O(64,64)"),
    ("O(8)²", "O(8,8)", "U(8,8)", "Sp(8,8)", "Sp(8,8)²", "Sp(16,16)", "U(32,32)", "O(64,64)", "O(64,64)²"),
)


# ---------------------------------------------------------------------------
# ψ base isomorphisms
# ---------------------------------------------------------------------------

_BASE_MODELS: Dict[str, Tuple[Signature, Tuple[np.ndarray, ...], Tuple[str, ...]]] = {}


def _base_models() -> Dict[str, Tuple[Signature, Tuple[np.ndarray, ...], Tuple[str, ...]]]:
    if not _BASE_MODELS:
        _BASE_MODELS.update(
            {
                "psi01": (Signature(0, 1), (MINUS_2,), ("i",)),
                "psi10": (Signature(1, 0), (PLUS_2,), ("(1,-1)",)),
                "psi02": (Signature(0, 2), (QUATERNION_I, QUATERNION_J), ("i", "j")),
                "psi11": (Signature(1, 1), (PLUS_2, MINUS_2), ("diag(1,-1)", "[[0,-1],[1,0]]")),
                "psi20": (Signature(2, 0), (PLUS_2, SWAP_2), ("diag(1,-1)", "[[0,1],[1,0]]")),
            }
        )
    return _BASE_MODELS


def _normalize_base_name(name: str) -> str:
    return name.replace("ψ", "psi").replace("_", "").replace(",", "").lower()


def base_isomorphism(name: str) -> AlgebraMorphism:
    key = _normalize_base_name(name)
    models = _base_models()
    if key not in models:
        raise MorphismError(f"Unknown base isomorphism {name!r}; expected one of {sorted(models)}")
    sig, gens, symbols = models[key]
    cls = classify_clifford(sig)
    algebra = MatrixAlgebra(sig, cls.ground, cls.n, cls.double, tuple(gens))
    return AlgebraMorphism(sig, algebra, tuple(gens), name=key, notes={"symbolic_images": symbols})


# ---------------------------------------------------------------------------
# φ_K
# ---------------------------------------------------------------------------


def _check_pair(pair: Sequence[int], sig: Signature, what: str) -> Tuple[int, int]:
    if len(pair) != 2:
        raise MorphismError(f"{what} must be a pair (k+, k-), got {pair!r}")
    k_plus, k_minus = int(pair[0]), int(pair[1])
    if not (0 <= k_plus <= sig.p and 0 <= k_minus <= sig.q):
        raise MorphismError(f"{what}=({k_plus},{k_minus}) is not contained in M={sig}")
    return k_plus, k_minus


def phi_K(K: Sequence[int], sig: Signature) -> AlgebraMorphism:
    """The isomorphism ``φ_K`` out of C(K+L), by ``ΔK mod 4``."""

    k_plus, k_minus = _check_pair(K, sig, "K")
    l_plus, l_minus = sig.p - k_plus, sig.q - k_minus
    case = (k_plus - k_minus) % 4
    k_sig = Signature(k_plus, k_minus)
    name = f"phi_({k_plus},{k_minus})"

    images: List[Element] = []
    if case in (0, 2):
        l_sig = Signature(l_plus, l_minus) if case == 0 else Signature(l_minus, l_plus)
        tsig = TensorSignature((k_sig, l_sig))
        v_k = MultiVector.blade(k_sig, v_k_mask(k_sig, k_plus, k_minus))
        one_l = MultiVector.scalar(l_sig)
        for sign, count, k_count in (("+", sig.p, k_plus), ("-", sig.q, k_minus)):
            for i in range(1, count + 1):
                if i <= k_count:
                    images.append(TensorVector.pure(tsig, [MultiVector.generator(k_sig, sign, i), one_l]))
                else:
                    j = i - k_count
                    target_sign = sign if case == 0 else ("-" if sign == "+" else "+")
                    images.append(TensorVector.pure(tsig, [v_k, MultiVector.generator(l_sig, target_sign, j)]))
        target: Target = tsig
    else:
        if case == 1:
            out_sig = Signature(k_plus + l_minus, k_minus + l_plus)
        else:
            out_sig = Signature(sig.p, sig.q)
        v_k = MultiVector.blade(out_sig, v_k_mask(out_sig, k_plus, k_minus))
        for sign, count, k_count in (("+", sig.p, k_plus), ("-", sig.q, k_minus)):
            other = "-" if sign == "+" else "+"
            for i in range(1, count + 1):
                if i <= k_count:
                    images.append(MultiVector.generator(out_sig, sign, i))
                elif case == 1:
                    j = i - k_count
                    other_k = k_minus if sign == "+" else k_plus
                    images.append(v_k * MultiVector.generator(out_sig, other, other_k + j))
                else:
                    images.append(v_k * MultiVector.generator(out_sig, sign, i))
        target = out_sig
    morphism = AlgebraMorphism(sig, target, tuple(images), name=name, notes={"case": case})
    return morphism


def phi_transfer_tau(K: Sequence[int], sig: Signature, sign: str, index: int) -> Callable[[Element], Element]:
    """The automorphism of φ_K's target that φ_K transfers ``τ_index^sign`` to."""

    k_plus, k_minus = _check_pair(K, sig, "K")
    case = (k_plus - k_minus) % 4
    morphism = phi_K(K, sig)
    target = morphism.target
    k_count = k_plus if sign == "+" else k_minus
    other = "-" if sign == "+" else "+"
    in_k = index <= k_count
    j = index - k_count

    if isinstance(target, TensorSignature):
        k_sig, l_sig = target.factors
        if in_k:
            # τ_i ↦ τ_i ⊗ T_L (case i) or τ_i ⊗ T_{L∨} (case iii): T of the full second factor.
            flips = (k_sig.generator_mask(sign, index), l_sig.full_mask)
        else:
            target_sign = sign if case == 0 else other
            flips = (0, l_sig.generator_mask(target_sign, j))
        return TensorAutomorphism(target, flips, label=f"transfer(tau_{index}{sign})")

    out_sig = target
    if in_k:
        l_part = out_sig.full_mask & ~v_k_mask(out_sig, k_plus, k_minus)
        return InnerAutomorphism.diagonal(out_sig, out_sig.generator_mask(sign, index) | l_part)
    if case == 1:
        other_k = k_minus if sign == "+" else k_plus
        return InnerAutomorphism.diagonal(out_sig, out_sig.generator_mask(other, other_k + j))
    return InnerAutomorphism.diagonal(out_sig, out_sig.generator_mask(sign, index))


def hyperbolic_tower(sig: Signature) -> AlgebraMorphism:
    """``C(r,r) → C(1,1)^{⊗r} → M(2^r,R)``: φ_(1,1) iterated, then ψ_(1,1) on every factor.

    The first tensor factor acts inside the 2×2 diagonal blocks and the last one is
    outermost, so ``v₁⁻ ↦ diag(J, ..., J)`` with ``J = ψ_(1,1)(v₁⁻)``.
    """

    if sig.p != sig.q or sig.p == 0:
        raise MorphismError(f"The φ_(1,1) tower needs C(r,r) with r >= 1, got C{sig}")
    psi = base_isomorphism("psi11")
    splits = {r: phi_K((1, 1), Signature(r, r)) for r in range(2, sig.p + 1)}

    def blade_matrix(r: int, mask: int) -> np.ndarray:
        if r == 1:
            return np.asarray(psi.image(mask), dtype=np.int64)
        size = 2 ** r
        total = np.zeros((size, size), dtype=np.int64)
        for (head, tail), coeff in splits[r].image(mask).items():
            if coeff.denominator != 1:
                raise MorphismError(f"φ_(1,1) produced a non-integral coefficient {coeff}")
            head_matrix = np.asarray(psi.image(head), dtype=np.int64)
            total += int(coeff) * np.kron(blade_matrix(r - 1, tail), head_matrix)
        return total

    images = tuple(blade_matrix(sig.p, mask) for mask in sig.generator_masks())
    algebra = MatrixAlgebra(sig, "R", 2 ** sig.p, False, images)
    return AlgebraMorphism(sig, algebra, images, name=f"phi11_tower_{sig.p}", notes={"factors": sig.p})


# ---------------------------------------------------------------------------
# λ_K, η_K, ξ_L
# ---------------------------------------------------------------------------


def lambda_K(K: Sequence[int], sig: Signature) -> AlgebraMorphism:
    k_plus, k_minus = _check_pair(K, sig, "K")
    if k_plus < 1 or k_minus < 1:
        raise MorphismError(f"λ_K needs 1 <= k± <= m±, got K=({k_plus},{k_minus}) in M={sig}")
    case = (k_plus - k_minus) % 4
    v = MultiVector.blade(sig, v_k_mask(sig, k_plus - 1, k_minus - 1))
    head = MultiVector.generator(sig, "+", k_plus) * MultiVector.generator(sig, "-", k_minus)

    images: List[MultiVector] = []
    for sign, count, k_count in (("+", sig.p, k_plus), ("-", sig.q, k_minus)):
        other = "-" if sign == "+" else "+"
        other_k = k_minus if sign == "+" else k_plus
        for i in range(1, count + 1):
            g = MultiVector.generator(sig, sign, i)
            if i == k_count:
                if case in (0, 3):
                    images.append(v * g)
                else:
                    images.append(v * MultiVector.generator(sig, other, other_k))
            elif (i < k_count) == (case % 2 == 0):
                images.append(head * g)
            else:
                images.append(g)
    return AlgebraMorphism(sig, sig, tuple(images), name=f"lambda_({k_plus},{k_minus})", notes={"case": case})


def lambda_epsilon(K: Sequence[int], sig: Signature, sign: str) -> Tuple[int, MultiVector]:
    """``λ_K(V_{k+-1,k--1} v_{k±}) = ε·g``; returns ``(ε, g)``."""

    k_plus, k_minus = _check_pair(K, sig, "K")
    morphism = lambda_K(K, sig)
    index = k_plus if sign == "+" else k_minus
    v = MultiVector.blade(sig, v_k_mask(sig, k_plus - 1, k_minus - 1))
    return _as_signed_generator(morphism.apply(v * MultiVector.generator(sig, sign, index)))


def _as_signed_generator(x: MultiVector) -> Tuple[int, MultiVector]:
    if not x.is_vector or not x.is_blade_multiple:
        raise MorphismError(f"{x} is not ± a single generator")
    ((mask, coeff),) = x.items()
    if abs(coeff) != 1:
        raise MorphismError(f"{x} is not ± a single generator")
    return int(coeff), MultiVector.blade(x.sig, mask)


def _tau_or_identity(v: MultiVector) -> AlgebraMorphism:
    if not v:
        return identity_morphism(v.sig)
    return automorphism_morphism(InnerAutomorphism.tau(v))


def eta_K(K: Sequence[int], sig: Signature) -> AlgebraMorphism:
    """``η_K: C(p,q) → C(1,1)⊗C(p-1,q-1)`` with ``η_K(V_K) = v₁^±⊗1``."""

    k_plus, k_minus = _check_pair(K, sig, "K")
    if sig.p < 1 or sig.q < 1:
        raise MorphismError(f"η_K needs p, q >= 1, got M={sig}")
    if (k_plus, k_minus) in ((0, 0), (sig.p, sig.q)):
        raise MorphismError(f"η_K needs K different from (0,0) and M, got K=({k_plus},{k_minus})")
    if k_plus < sig.p and k_minus > 0:
        k_prime = (k_plus + 1, k_minus)
    else:
        k_prime = (k_plus, k_minus + 1)
    lam = lambda_K(k_prime, sig)
    v_k = MultiVector.blade(sig, v_k_mask(sig, k_plus, k_minus))
    epsilon, g = _as_signed_generator(lam.apply(v_k))
    target_sign = "+" if (k_plus - k_minus) % 4 in (0, 1) else "-"
    t = MultiVector.generator(sig, target_sign, 1)
    tau = _tau_or_identity(g * epsilon - t)
    morphism = lam.compose(tau).compose(phi_K((1, 1), sig))
    morphism.name = f"eta_({k_plus},{k_minus})"
    morphism.notes.update({"K_prime": k_prime, "epsilon": epsilon, "target_generator": f"v{target_sign}1"})
    return morphism


def xi_L(L: Sequence[int], sig: Signature) -> AlgebraMorphism:
    """``ξ_L: C(p,q) → C(X)⊗C(Y)`` with ``ξ_L(T_L) = id⊗τ₁^±``."""

    l_plus, l_minus = _check_pair(L, sig, "L")
    k_plus, k_minus = sig.p - l_plus, sig.q - l_minus
    if sig.p < 1:
        raise MorphismError(f"ξ_L needs p >= 1, got M={sig}")
    if (k_plus, k_minus) in ((0, 0), (sig.p, sig.q)):
        raise MorphismError(f"ξ_L needs K=M-L different from (0,0) and M, got K=({k_plus},{k_minus})")
    if sig.delta % 2 == 0 or (l_plus - l_minus) % 2 == 0:
        raise MorphismError(f"ξ_L needs ΔM and ΔL odd, got ΔM={sig.delta}, ΔL={l_plus - l_minus}")
    if k_minus >= 1 and k_plus < sig.p:
        k_prime = (k_plus + 1, k_minus)
    elif k_plus >= 1 and k_minus < sig.q:
        k_prime = (k_plus, k_minus + 1)
    else:
        raise MorphismError(f"ξ_L has no admissible K' for K=({k_plus},{k_minus}) in M={sig}")
    lam = lambda_K(k_prime, sig)
    delta_k = (k_plus - k_minus) % 4
    if delta_k == 0:
        v = MultiVector.generator(sig, "-", k_prime[1]) - MultiVector.generator(sig, "-", sig.q)
        chain = lam.compose(_tau_or_identity(v)).compose(phi_K((1, 0), sig))
        chain = chain.compose(phi_K((sig.q, sig.p - 1), chain.target))
        x_pair = (sig.q, sig.p - 1)
    else:
        v = MultiVector.generator(sig, "+", k_prime[0]) - MultiVector.generator(sig, "+", sig.p)
        chain = lam.compose(_tau_or_identity(v)).compose(phi_K((sig.p - 1, sig.q), sig))
        x_pair = (sig.p - 1, sig.q)
    y_pair = (1, 0) if sig.delta % 4 == 1 else (0, 1)
    chain.name = f"xi_({l_plus},{l_minus})"
    chain.notes.update({"K_prime": k_prime, "X": x_pair, "Y": y_pair, "tau_sign": "+" if y_pair == (1, 0) else "-"})
    return chain


def xi_transfer_holds(L: Sequence[int], sig: Signature) -> bool:
    """``ξ_L ∘ T_L = (id⊗τ₁^±) ∘ ξ_L`` checked on generators."""

    morphism = xi_L(L, sig)
    t_l = InnerAutomorphism.T(sig, int(L[0]), int(L[1]))
    target_aut = TensorAutomorphism.id_tensor_tau(morphism.target)
    return morphism.commutes_with(t_l, target_aut)


# ---------------------------------------------------------------------------
# C_even(p,q) ≅ C(p,q-1) and G(p,q) ≅ G(q,p)
# ---------------------------------------------------------------------------


def _drop_bit(mask: int, bit: int) -> int:
    low = mask & ((1 << bit) - 1)
    return low | ((mask >> (bit + 1)) << bit)


@dataclass
class EvenReduction:
    """``C_even(p,q) → C(p,q)^{τ₁⁻} ≅ C(p,q-1)`` via ``φ_{0,1}``."""

    source: Signature
    target: Signature
    phi: Optional[AlgebraMorphism]
    name: str = "even_reduction"

    def apply(self, a: MultiVector) -> MultiVector:
        if a.sig != self.source:
            raise MorphismError(f"Expected an element of C_even{self.source}, got C{a.sig}")
        if not a.is_even:
            raise MorphismError(f"{a} is not in C_even{self.source}")
        if self.phi is None:
            return MultiVector(self.target, a.terms)
        image = self.phi.apply(a)
        minus_one = 1 << self.source.p
        terms = {}
        for mask, coeff in image.items():
            if mask & minus_one:
                raise MorphismError(f"φ_(0,1) image {image} leaves the τ₁⁻-fixed subalgebra")
            terms[_drop_bit(mask, self.source.p)] = coeff
        return MultiVector(self.target, terms)

    __call__ = apply

    def even_basis(self) -> List[int]:
        return [m for m in range(self.source.dim) if popcount(m) % 2 == 0]

    def inverse(self) -> AlgebraMorphism:
        """The generator-defined isomorphism ``C(p,q-1) → C_even(p,q)``."""

        if self.phi is None:
            return identity_morphism(self.source)
        sig = self.source
        v1 = MultiVector.generator(sig, "-", 1)
        images = []
        for i in range(1, sig.p + 1):
            images.append(MultiVector.generator(sig, "+", i) * v1)
        for j in range(2, sig.q + 1):
            images.append(MultiVector.generator(sig, "-", j) * v1)
        return AlgebraMorphism(self.target, sig, tuple(images), name="even_reduction_inverse")

    def is_multiplicative(self, masks: Optional[Sequence[int]] = None) -> bool:
        basis = list(masks) if masks is not None else self.even_basis()
        for a in basis:
            x = MultiVector.blade(self.source, a)
            for b in basis:
                y = MultiVector.blade(self.source, b)
                if self.apply(x * y) != self.apply(x) * self.apply(y):
                    return False
        return True


def even_reduction(sig: Signature) -> EvenReduction:
    if sig.q == 0:
        if sig.p == 0:
            return EvenReduction(sig, sig, None)
        raise MorphismError(f"C_even{sig} ≅ C(p,q-1) needs q >= 1; use the G(p,q) ≅ G(q,p) chain")
    return EvenReduction(sig, Signature(sig.p, sig.q - 1), phi_K((0, 1), sig))


@dataclass
class EvenReductionChain:
    """``C_even(p,q) → C(p,q-1) → C(p+1,q-1)^{τ₁⁺} → C_even(q,p)``."""

    source: Signature
    target: Signature
    reduction: EvenReduction
    phi10: AlgebraMorphism

    def apply(self, a: MultiVector) -> MultiVector:
        reduced = self.reduction.apply(a)
        lifted_sig = self.phi10.source
        shifted = MultiVector(lifted_sig, {mask << 1: c for mask, c in reduced.items()})
        return self.phi10.apply(shifted)

    __call__ = apply

    def verify_transfer(self) -> bool:
        """``T_{p,0}`` on the source corresponds to ``T_{0,p}`` on the target."""

        t_source = InnerAutomorphism.T(self.source, self.source.p, 0)
        t_target = InnerAutomorphism.T(self.target, 0, self.source.p)
        for mask in self.reduction.even_basis():
            a = MultiVector.blade(self.source, mask)
            image = self.apply(a)
            if not image.is_even:
                return False
            if self.apply(t_source(a)) != t_target(image):
                return False
        return True


def even_reduction_chain(sig: Signature) -> EvenReductionChain:
    if sig.q == 0:
        raise MorphismError(f"The G(p,q) ≅ G(q,p) chain needs q >= 1, got {sig}")
    reduction = even_reduction(sig)
    lifted = Signature(sig.p + 1, sig.q - 1)
    phi10 = phi_K((1, 0), lifted)
    return EvenReductionChain(sig, phi10.target, reduction, phi10)


# ---------------------------------------------------------------------------
# Real representations
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _real_generators(p: int, q: int) -> Tuple[np.ndarray, ...]:
    base = {
        (0, 0): (),
        (1, 0): (PLUS_2,),
        (0, 1): (MINUS_2,),
        (2, 0): (PLUS_2, SWAP_2),
        (0, 2): (QUATERNION_I, QUATERNION_J),
        (1, 1): (PLUS_2, MINUS_2),
        (0, 3): (
            np.kron(QUATERNION_I, np.eye(2, dtype=np.int64)),
            np.kron(QUATERNION_J, np.eye(2, dtype=np.int64)),
            np.kron(QUATERNION_I @ QUATERNION_J, PLUS_2),
        ),
    }
    if (p, q) in base:
        gens = base[(p, q)]
    elif p >= 1 and q >= 1:
        sub = _real_generators(p - 1, q - 1)
        size = sub[0].shape[0] if sub else 1
        identity = np.eye(size, dtype=np.int64)
        plus = [np.kron(PLUS_2, identity)] + [np.kron(PLUS_MINUS_2, b) for b in sub[: p - 1]]
        minus = [np.kron(MINUS_2, identity)] + [np.kron(PLUS_MINUS_2, b) for b in sub[p - 1 :]]
        gens = tuple(plus + minus)
    elif q == 0:
        sub = _real_generators(1, p - 1)
        a = sub[0]
        gens = (a,) + tuple(a @ b for b in sub[1:])
    else:
        sub = _real_generators(q - 3, 3)
        plus, minus = sub[: q - 3], sub[q - 3 :]
        omega = minus[0] @ minus[1] @ minus[2]
        gens = tuple(minus) + tuple(omega @ a for a in plus)
    for g in gens:
        g.setflags(write=False)
    return tuple(gens)


def build_real_rep(sig: Signature, max_size: Optional[int] = None) -> MatrixAlgebra:
    """Integer real matrix model of C(p,q) (generator order: plus, then minus)."""

    cap = max_size if max_size is not None else get_config().max_rep_size
    if sig.n > cap:
        raise RepresentationSizeError(f"C{sig} exceeds the representation cap p+q <= {cap}")
    cls = classify_clifford(sig)
    gens = _real_generators(sig.p, sig.q)
    algebra = MatrixAlgebra(sig, cls.ground, cls.n, cls.double, gens)
    if algebra.size != cls.real_model_size:
        logger.warning("C%s model has size %d, expected %d", sig, algebra.size, cls.real_model_size)
    return algebra


def real_rep_morphism(sig: Signature, max_size: Optional[int] = None) -> AlgebraMorphism:
    algebra = build_real_rep(sig, max_size=max_size)
    return AlgebraMorphism(sig, algebra, algebra.generators, name=f"iota_{sig.p}{sig.q}")


# ---------------------------------------------------------------------------
# Table reproduction
# ---------------------------------------------------------------------------


@dataclass
class TableCheck:
    name: str
    passed: List[str] = field(default_factory=list)
    failed: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failed


def verify_clifford_table(limit: int = 8) -> TableCheck:
    check = TableCheck("C(p,q) table")
    for p in range(limit + 1):
        for q in range(limit + 1):
            got = classify_clifford(Signature(p, q)).label
            expected = CLIFFORD_TABLE[p][q]
            entry = f"C({p},{q}) = {got}"
            (check.passed if got == expected else check.failed).append(
                entry if got == expected else f"{entry}, table says {expected}"
            )
    logger.info("C(p,q) table: %d passed, %d failed", len(check.passed), len(check.failed))
    return check


def verify_group_table(limit: int = 8, aut_j_limit: int = 10) -> TableCheck:
    """Labels against the table, plus blade-count dim/d and the Aut(J±) cross-check."""

    from lie_descriptors import group_stats

    check = TableCheck("G(p,q) table")
    for p in range(limit + 1):
        for q in range(limit + 1):
            sig = Signature(p, q)
            group = classify_group(sig)
            expected = GROUP_TABLE[p][q]
            if group.label != expected:
                check.failed.append(f"G({p},{q}) = {group.label}, table says {expected}")
                continue
            stats = group_stats(group.descriptor())
            blade_dim = len(lie_algebra_basis_g(sig))
            blade_d = d_by_blades(sig)
            if stats.dim != blade_dim or stats.d != blade_d:
                check.failed.append(
                    f"G({p},{q}) = {group.label}: dim/d {stats.dim}/{stats.d} vs blades {blade_dim}/{blade_d}"
                )
                continue
            if sig.n <= aut_j_limit:
                for which in ("plus", "minus"):
                    if len(aut_j_lie_basis(sig, which)) != blade_dim:
                        check.failed.append(f"G({p},{q}): Aut(J_{which}) linearization has wrong dimension")
            check.passed.append(f"G({p},{q}) = {group.label} (dim {blade_dim}, d {blade_d})")
    logger.info("G(p,q) table: %d passed, %d failed", len(check.passed), len(check.failed))
    return check


def signature_pairs(total: int) -> Iterable[Signature]:
    for n in range(total + 1):
        for p in range(n + 1):
            yield Signature(p, n - p)

