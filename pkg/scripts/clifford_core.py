"""Exact arithmetic in the Clifford algebra C(p,q).

Blades are bitmasks over the ordered generator list
``(v1+, ..., vp+, v1-, ..., vq-)``: bit ``i`` (``i < p``) is ``v(i+1)+`` and bit
``p + j`` is ``v(j+1)-``.  Coefficients are :class:`fractions.Fraction`, so every
identity checked here is exact.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from cck_config import get_config
from exact_linalg import format_rational, parse_rational, to_fraction

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]

SPECIAL_KINDS = ("V_K", "J_plus", "J_minus", "J")


class CliffordDomainError(ValueError):
    """Raised when an operation is applied outside its domain."""


# ---------------------------------------------------------------------------
# Signatures and blades
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Signature:
    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p < 0 or self.q < 0:
            raise CliffordDomainError(f"Signature ({self.p},{self.q}) has a negative entry")
        limit = get_config().max_signature
        if self.p + self.q > limit:
            raise CliffordDomainError(
                f"Signature ({self.p},{self.q}) exceeds the bound p+q <= {limit}"
            )

    @classmethod
    def from_text(cls, text: str) -> "Signature":
        match = re.match(r"^\s*\(?\s*(\d+)\s*,\s*(\d+)\s*\)?\s*$", text)
        if not match:
            raise CliffordDomainError(f"Invalid signature '{text}'. Expected 'p,q'.")
        return cls(int(match.group(1)), int(match.group(2)))

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def dim(self) -> int:
        return 1 << self.n

    @property
    def delta(self) -> int:
        return self.p - self.q

    @property
    def plus_mask(self) -> int:
        return (1 << self.p) - 1

    @property
    def minus_mask(self) -> int:
        return ((1 << self.q) - 1) << self.p

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def generator_mask(self, sign: str, index: int) -> int:
        """Mask of ``v_index^sign`` (``index`` is 1-based)."""

        if sign == "+":
            if not 1 <= index <= self.p:
                raise CliffordDomainError(f"v{index}+ does not exist in C({self.p},{self.q})")
            return 1 << (index - 1)
        if sign == "-":
            if not 1 <= index <= self.q:
                raise CliffordDomainError(f"v{index}- does not exist in C({self.p},{self.q})")
            return 1 << (self.p + index - 1)
        raise CliffordDomainError(f"Generator sign must be '+' or '-', got {sign!r}")

    def generator_masks(self) -> List[int]:
        return [1 << i for i in range(self.n)]

    def generator_square(self, bit: int) -> int:
        return 1 if bit < self.p else -1

    def quadratic_form(self, coords: Sequence[Scalar]) -> Fraction:
        if len(coords) != self.n:
            raise CliffordDomainError(f"Expected {self.n} coordinates, got {len(coords)}")
        values = [to_fraction(c) for c in coords]
        return sum((c * c for c in values[: self.p]), Fraction(0)) - sum(
            (c * c for c in values[self.p :]), Fraction(0)
        )

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def reorder_sign(a: int, b: int) -> int:
    """Sign of moving the generators of ``b`` past those of ``a`` into ascending order."""

    a >>= 1
    swaps = 0
    while a:
        swaps += popcount(a & b)
        a >>= 1
    return -1 if swaps & 1 else 1


def blade_product(sig: Signature, a: int, b: int) -> Tuple[int, int]:
    """``e_a * e_b = sign * e_(a xor b)``."""

    sign = reorder_sign(a, b)
    if popcount(a & b & sig.minus_mask) & 1:
        sign = -sign
    return sign, a ^ b


def reversion_sign(mask: int) -> int:
    s = popcount(mask)
    return -1 if (s * (s - 1) // 2) & 1 else 1


def blade_index(sig: Signature, mask: int) -> int:
    """``index(a) = t - r`` for a blade with ``r`` plus and ``t`` minus generators."""

    return popcount(mask & sig.minus_mask) - popcount(mask & sig.plus_mask)


def pair_degree(a: int, b: int) -> int:
    return popcount(a & b)


def blade_label(sig: Signature, mask: int) -> str:
    if mask == 0:
        return "1"
    parts = []
    for bit in range(sig.n):
        if mask >> bit & 1:
            if bit < sig.p:
                parts.append(f"v+{bit + 1}")
            else:
                parts.append(f"v-{bit - sig.p + 1}")
    return "".join(parts)


@dataclass(frozen=True, order=True)
class Blade:
    sig: Signature
    mask: int

    @property
    def degree(self) -> int:
        return popcount(self.mask)

    @property
    def index(self) -> int:
        return blade_index(self.sig, self.mask)

    @property
    def minus_count(self) -> int:
        return popcount(self.mask & self.sig.minus_mask)

    def pair_degree(self, other: "Blade") -> int:
        return pair_degree(self.mask, other.mask)

    def as_multivector(self) -> "MultiVector":
        return MultiVector.blade(self.sig, self.mask)

    def __str__(self) -> str:
        return blade_label(self.sig, self.mask)


# ---------------------------------------------------------------------------
# Multivectors
# ---------------------------------------------------------------------------


class MultiVector:
    """Sparse element of C(p,q): blade mask -> non-zero rational coefficient."""

    __slots__ = ("sig", "_terms")

    def __init__(self, sig: Signature, terms: Optional[Mapping[int, Scalar]] = None) -> None:
        self.sig = sig
        cleaned: Dict[int, Fraction] = {}
        for mask, coeff in (terms or {}).items():
            if mask < 0 or mask > sig.full_mask:
                raise CliffordDomainError(f"Blade mask {mask} outside C{sig}")
            value = to_fraction(coeff)
            if value != 0:
                cleaned[mask] = value
        self._terms = cleaned

    @classmethod
    def scalar(cls, sig: Signature, value: Scalar = 1) -> "MultiVector":
        return cls(sig, {0: value})

    @classmethod
    def zero(cls, sig: Signature) -> "MultiVector":
        return cls(sig)

    @classmethod
    def blade(cls, sig: Signature, mask: int, coeff: Scalar = 1) -> "MultiVector":
        return cls(sig, {mask: coeff})

    @classmethod
    def generator(cls, sig: Signature, sign: str, index: int) -> "MultiVector":
        return cls.blade(sig, sig.generator_mask(sign, index))

    @classmethod
    def from_vector_coords(cls, sig: Signature, coords: Sequence[Scalar]) -> "MultiVector":
        if len(coords) != sig.n:
            raise CliffordDomainError(f"Expected {sig.n} coordinates, got {len(coords)}")
        return cls(sig, {1 << i: c for i, c in enumerate(coords)})

    @property
    def terms(self) -> Dict[int, Fraction]:
        return dict(self._terms)

    def items(self) -> List[Tuple[int, Fraction]]:
        return sorted(self._terms.items())

    def coefficient(self, mask: int) -> Fraction:
        return self._terms.get(mask, Fraction(0))

    def scalar_part(self) -> Fraction:
        return self.coefficient(0)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def _coerce(self, other: object) -> "MultiVector":
        if isinstance(other, MultiVector):
            if other.sig != self.sig:
                raise CliffordDomainError(f"Signature mismatch: C{self.sig} vs C{other.sig}")
            return other
        if isinstance(other, (int, Fraction)):
            return MultiVector.scalar(self.sig, other)
        raise TypeError(f"Cannot combine MultiVector with {type(other).__name__}")

    def __add__(self, other: object) -> "MultiVector":
        rhs = self._coerce(other)
        terms = dict(self._terms)
        for mask, coeff in rhs._terms.items():
            terms[mask] = terms.get(mask, Fraction(0)) + coeff
        return MultiVector(self.sig, terms)

    __radd__ = __add__

    def __neg__(self) -> "MultiVector":
        return MultiVector(self.sig, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: object) -> "MultiVector":
        return self + (-self._coerce(other))

    def __rsub__(self, other: object) -> "MultiVector":
        return self._coerce(other) - self

    def __mul__(self, other: object) -> "MultiVector":
        if isinstance(other, (int, Fraction)):
            value = to_fraction(other)
            return MultiVector(self.sig, {m: c * value for m, c in self._terms.items()})
        return geometric_product(self, self._coerce(other))

    def __rmul__(self, other: object) -> "MultiVector":
        if isinstance(other, (int, Fraction)):
            return self * other
        return geometric_product(self._coerce(other), self)

    def __truediv__(self, other: Scalar) -> "MultiVector":
        value = to_fraction(other)
        if value == 0:
            raise ZeroDivisionError("MultiVector division by zero")
        return self * (1 / value)

    def __pow__(self, exponent: int) -> "MultiVector":
        if exponent < 0:
            raise CliffordDomainError("Negative powers are not supported")
        result = MultiVector.scalar(self.sig)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self._terms == MultiVector.scalar(self.sig, other)._terms
        if not isinstance(other, MultiVector):
            return NotImplemented
        return self.sig == other.sig and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.sig, tuple(self.items())))

    def __repr__(self) -> str:
        return f"MultiVector(C{self.sig}, {format_multivector(self)})"

    def __str__(self) -> str:
        return format_multivector(self)

    # grading ------------------------------------------------------------

    def grade(self, k: int) -> "MultiVector":
        return MultiVector(self.sig, {m: c for m, c in self._terms.items() if popcount(m) == k})

    def even_part(self) -> "MultiVector":
        return MultiVector(self.sig, {m: c for m, c in self._terms.items() if popcount(m) % 2 == 0})

    def odd_part(self) -> "MultiVector":
        return MultiVector(self.sig, {m: c for m, c in self._terms.items() if popcount(m) % 2 == 1})

    @property
    def is_even(self) -> bool:
        return all(popcount(m) % 2 == 0 for m in self._terms)

    @property
    def is_odd(self) -> bool:
        return all(popcount(m) % 2 == 1 for m in self._terms)

    @property
    def is_vector(self) -> bool:
        return all(popcount(m) == 1 for m in self._terms)

    @property
    def is_scalar(self) -> bool:
        return all(m == 0 for m in self._terms)

    @property
    def is_blade_multiple(self) -> bool:
        return len(self._terms) == 1

    def vector_coords(self) -> Tuple[Fraction, ...]:
        if not self.is_vector:
            raise CliffordDomainError(f"{self} is not a vector")
        return tuple(self.coefficient(1 << i) for i in range(self.sig.n))

    def quadratic_form(self) -> Fraction:
        return self.sig.quadratic_form(self.vector_coords())

    # involutions ----------------------------------------------------------

    def reverse(self) -> "MultiVector":
        return reversion(self)

    def star(self) -> "MultiVector":
        return star_conjugation(self)


def geometric_product(a: MultiVector, b: MultiVector) -> MultiVector:
    if a.sig != b.sig:
        raise CliffordDomainError(f"Signature mismatch: C{a.sig} vs C{b.sig}")
    sig = a.sig
    out: Dict[int, Fraction] = {}
    for ma, ca in a._terms.items():
        for mb, cb in b._terms.items():
            sign, mask = blade_product(sig, ma, mb)
            out[mask] = out.get(mask, Fraction(0)) + (ca * cb if sign > 0 else -ca * cb)
    return MultiVector(sig, out)


def reversion(a: MultiVector) -> MultiVector:
    """The anti-automorphism ``a -> ᵗa``."""

    return MultiVector(a.sig, {m: c * reversion_sign(m) for m, c in a._terms.items()})


def _flip_sign(mask: int, flip: int) -> int:
    return -1 if popcount(mask & flip) & 1 else 1


def t_flip_mask(sig: Signature, l_plus: int, l_minus: int) -> int:
    if not (0 <= l_plus <= sig.p and 0 <= l_minus <= sig.q):
        raise CliffordDomainError(f"T_({l_plus},{l_minus}) is out of range in C{sig}")
    plus = ((1 << l_plus) - 1) << (sig.p - l_plus)
    minus = ((1 << l_minus) - 1) << (sig.p + sig.q - l_minus)
    return plus | minus


def star_conjugation(a: MultiVector) -> MultiVector:
    """``a* = T_{0,q}(ᵗa)``."""

    flip = a.sig.minus_mask
    return MultiVector(
        a.sig, {m: c * reversion_sign(m) * _flip_sign(m, flip) for m, c in a._terms.items()}
    )


# ---------------------------------------------------------------------------
# Inner automorphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InnerAutomorphism:
    """Involutive automorphism ``τ_v`` or ``T_L`` (and diagonal composites).

    Diagonal automorphisms flip the sign of every generator in ``flip``; the
    reflection in a general non-null vector keeps ``vector`` instead.
    """

    sig: Signature
    flip: Optional[int] = None
    vector: Optional[MultiVector] = field(default=None, compare=False)
    label: str = ""

    @classmethod
    def T(cls, sig: Signature, l_plus: int, l_minus: int) -> "InnerAutomorphism":
        return cls(sig, flip=t_flip_mask(sig, l_plus, l_minus), label=f"T_({l_plus},{l_minus})")

    @classmethod
    def tau_generator(cls, sig: Signature, sign: str, index: int) -> "InnerAutomorphism":
        return cls(sig, flip=sig.generator_mask(sign, index), label=f"tau_{index}{sign}")

    @classmethod
    def diagonal(cls, sig: Signature, flip: int, label: str = "") -> "InnerAutomorphism":
        return cls(sig, flip=flip & sig.full_mask, label=label or f"diag({flip:b})")

    @classmethod
    def tau(cls, v: MultiVector) -> "InnerAutomorphism":
        if not v.is_vector or not v:
            raise CliffordDomainError(f"τ_v needs a non-zero vector, got {v}")
        if v.quadratic_form() == 0:
            raise CliffordDomainError(f"τ_v is undefined for the null vector {v}")
        if v.is_blade_multiple:
            (mask,) = v.terms
            return cls(v.sig, flip=mask, label=f"tau_{blade_label(v.sig, mask)}")
        return cls(v.sig, vector=v, label=f"tau_({v})")

    @property
    def is_diagonal(self) -> bool:
        return self.flip is not None

    def on_blade(self, mask: int) -> Tuple[int, int]:
        if self.flip is None:
            raise CliffordDomainError(f"{self.label} is not diagonal on the blade basis")
        return _flip_sign(mask, self.flip), mask

    def compose(self, other: "InnerAutomorphism") -> "InnerAutomorphism":
        if self.sig != other.sig:
            raise CliffordDomainError("Cannot compose automorphisms of different algebras")
        if self.flip is None or other.flip is None:
            raise CliffordDomainError("Only diagonal automorphisms compose into a diagonal one")
        return InnerAutomorphism(self.sig, flip=self.flip ^ other.flip, label=f"{self.label}∘{other.label}")

    def __call__(self, a: MultiVector) -> MultiVector:
        if a.sig != self.sig:
            raise CliffordDomainError(f"Signature mismatch: C{a.sig} vs C{self.sig}")
        if self.flip is not None:
            return MultiVector(a.sig, {m: c * _flip_sign(m, self.flip) for m, c in a._terms.items()})
        return reflect_tau(self.vector, a)


def grade_involution_T(sig: Signature, l_plus: int, l_minus: int) -> InnerAutomorphism:
    """``T_L``: flips the last ``l_plus`` plus- and last ``l_minus`` minus-generators."""

    return InnerAutomorphism.T(sig, l_plus, l_minus)


def reflect_tau(v: MultiVector, a: MultiVector) -> MultiVector:
    """``τ_v(a) = v T_{p,q}(a) v / Q(v)``; on vectors ``a - 2<a,v>/Q(v) v``."""

    if v.sig != a.sig:
        raise CliffordDomainError(f"Signature mismatch: C{v.sig} vs C{a.sig}")
    if not v.is_vector or not v:
        raise CliffordDomainError(f"τ_v needs a non-zero vector, got {v}")
    norm = v.quadratic_form()
    if norm == 0:
        raise CliffordDomainError(f"τ_v is undefined for the null vector {v} (Q(v)=0)")
    graded = MultiVector(a.sig, {m: c * (-1 if popcount(m) & 1 else 1) for m, c in a._terms.items()})
    return (v * graded * v) / norm


# ---------------------------------------------------------------------------
# Spin, G(p,q) and the twisted adjoint action
# ---------------------------------------------------------------------------


def twisted_conjugation_rho(x: MultiVector, a: MultiVector) -> MultiVector:
    """``ρ(x)(a) = x a ᵗx`` for ``x`` with ``ᵗx x = 1`` and ``a`` in E."""

    if x.sig != a.sig:
        raise CliffordDomainError(f"Signature mismatch: C{x.sig} vs C{a.sig}")
    if not a.is_vector:
        raise CliffordDomainError(f"ρ(x) acts on vectors, got {a}")
    if not x.is_even or reversion(x) * x != 1:
        raise CliffordDomainError(f"{x} is not in the group G{x.sig} (needs even and ᵗx·x = 1)")
    image = x * a * reversion(x)
    if not image.is_vector:
        raise CliffordDomainError(f"ρ({x}) does not preserve E")
    return image


def rho_matrix(x: MultiVector) -> List[List[Fraction]]:
    """Matrix of ρ(x) on E in the generator basis (columns are images)."""

    sig = x.sig
    columns = [
        twisted_conjugation_rho(x, MultiVector.blade(sig, 1 << i)).vector_coords() for i in range(sig.n)
    ]
    return [[columns[j][i] for j in range(sig.n)] for i in range(sig.n)]


def preserves_form(matrix: Sequence[Sequence[Fraction]], sig: Signature) -> bool:
    eta = [1] * sig.p + [-1] * sig.q
    n = sig.n
    for i in range(n):
        for j in range(n):
            value = sum(matrix[k][i] * eta[k] * matrix[k][j] for k in range(n))
            if value != (eta[i] if i == j else 0):
                return False
    return True


def is_in_group_G(a: MultiVector) -> bool:
    return a.is_even and reversion(a) * a == 1


def is_in_spin(a: MultiVector) -> bool:
    """Group membership plus ρ(a)(E) ⊂ E; mon-decomposability is not decided."""

    if not is_in_group_G(a):
        return False
    for mask in a.sig.generator_masks():
        image = a * MultiVector.blade(a.sig, mask) * reversion(a)
        if not image.is_vector:
            return False
    return True


# ---------------------------------------------------------------------------
# Distinguished elements
# ---------------------------------------------------------------------------


def v_k_mask(sig: Signature, k_plus: int, k_minus: int) -> int:
    if not (0 <= k_plus <= sig.p and 0 <= k_minus <= sig.q):
        raise CliffordDomainError(f"V_({k_plus},{k_minus}) is out of range in C{sig}")
    return ((1 << k_plus) - 1) | (((1 << k_minus) - 1) << sig.p)


def _special_k(kind: str, sig: Signature, k_plus: Optional[int], k_minus: Optional[int]) -> Tuple[int, int]:
    if kind == "V_K":
        if k_plus is None or k_minus is None:
            raise CliffordDomainError("V_K needs k_plus and k_minus")
        return k_plus, k_minus
    if kind == "J_plus":
        return sig.p, 0
    if kind == "J_minus":
        return 0, sig.q
    if kind == "J":
        return sig.p, sig.q
    raise CliffordDomainError(f"Unknown special element {kind!r}; expected one of {SPECIAL_KINDS}")


def special_element(kind: str, sig: Signature, k_plus: Optional[int] = None, k_minus: Optional[int] = None) -> MultiVector:
    kp, km = _special_k(kind, sig, k_plus, k_minus)
    return MultiVector.blade(sig, v_k_mask(sig, kp, km))


def square_sign(kind: str, sig: Signature, k_plus: Optional[int] = None, k_minus: Optional[int] = None) -> int:
    """``V_K² = 1`` iff ``ΔK ≡ 0, 1 (mod 4)``."""

    kp, km = _special_k(kind, sig, k_plus, k_minus)
    v_k_mask(sig, kp, km)
    return 1 if (kp - km) % 4 in (0, 1) else -1


def is_central(a: MultiVector) -> bool:
    for mask in a.sig.generator_masks():
        g = MultiVector.blade(a.sig, mask)
        if g * a != a * g:
            return False
    return True


# ---------------------------------------------------------------------------
# Lie algebra g(p,q) and fixed subalgebras
# ---------------------------------------------------------------------------


def iter_blades(sig: Signature) -> Iterator[Blade]:
    for mask in range(sig.dim):
        yield Blade(sig, mask)


def lie_algebra_basis_g(sig: Signature) -> List[Blade]:
    """Even blades with ``ᵗb = -b`` (degree ≡ 2 mod 4)."""

    return [b for b in iter_blades(sig) if b.degree % 4 == 2]


def d_by_blades(sig: Signature) -> int:
    """Count of g(p,q) blades not fixed by the Cartan involution ``X -> -X*``."""

    return sum(1 for b in lie_algebra_basis_g(sig) if b.minus_count % 2 == 1)


def aut_j_lie_basis(sig: Signature, which: str = "plus") -> List[Blade]:
    """Even blades X with ``X* J± + J± X = 0``."""

    kind = {"plus": "J_plus", "minus": "J_minus"}.get(which)
    if kind is None:
        raise CliffordDomainError(f"which must be 'plus' or 'minus', got {which!r}")
    j = special_element(kind, sig)
    basis = []
    for blade in iter_blades(sig):
        if blade.degree % 2:
            continue
        x = blade.as_multivector()
        if not star_conjugation(x) * j + j * x:
            basis.append(blade)
    return basis


def fixed_subalgebra(aut: InnerAutomorphism, *more: InnerAutomorphism) -> List[Blade]:
    """Blade basis of the subalgebra fixed by every given diagonal automorphism."""

    automorphisms = (aut,) + more
    for item in automorphisms:
        if not item.is_diagonal:
            raise CliffordDomainError(f"{item.label} has no blade basis for its fixed subalgebra")
        if item.sig != aut.sig:
            raise CliffordDomainError("Automorphisms act on different algebras")
    return [
        b for b in iter_blades(aut.sig) if all(item.on_blade(b.mask)[0] == 1 for item in automorphisms)
    ]


# ---------------------------------------------------------------------------
# Rational stand-ins for cosh/sinh and cos/sin
# ---------------------------------------------------------------------------


def rational_hyperbolic_point(t: Scalar) -> Tuple[Fraction, Fraction]:
    """``((1+t²)/(1-t²), 2t/(1-t²))`` on ``x² - y² = 1``."""

    t = to_fraction(t)
    if t * t == 1:
        raise CliffordDomainError("t = ±1 has no point on the hyperbola")
    den = 1 - t * t
    return (1 + t * t) / den, 2 * t / den


def rational_circle_point(t: Scalar) -> Tuple[Fraction, Fraction]:
    t = to_fraction(t)
    den = 1 + t * t
    return (1 - t * t) / den, 2 * t / den


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

_TERM_RE = re.compile(r"\s*([+-])?\s*(?:(\d+(?:\s*/\s*\d+)?)(?:\s*\*\s*)?)?((?:v[+-]\d+)+)?\s*")
_GENERATOR_RE = re.compile(r"v([+-])(\d+)")


def parse_multivector(text: str, sig: Signature) -> MultiVector:
    """Parse ``3/2*v+1v-2 - 1`` style text."""

    text = text.strip()
    if not text:
        raise CliffordDomainError("Empty multivector text")
    result = MultiVector.zero(sig)
    pos = 0
    first = True
    while pos < len(text):
        match = _TERM_RE.match(text, pos)
        sign, coeff_text, chain = match.group(1), match.group(2), match.group(3)
        if match.end() == pos or (coeff_text is None and chain is None):
            raise CliffordDomainError(f"Cannot parse multivector text at {text[pos:]!r}")
        if sign is None and not first:
            raise CliffordDomainError(f"Missing '+' or '-' before {text[pos:]!r}")
        try:
            coeff = parse_rational(coeff_text.replace(" ", "")) if coeff_text else Fraction(1)
        except ValueError as exc:
            raise CliffordDomainError(str(exc)) from exc
        if sign == "-":
            coeff = -coeff
        term = MultiVector.scalar(sig, coeff)
        if chain:
            for g_sign, g_index in _GENERATOR_RE.findall(chain):
                term = term * MultiVector.generator(sig, g_sign, int(g_index))
        result = result + term
        pos = match.end()
        first = False
    return result


def format_multivector(a: MultiVector) -> str:
    if not a:
        return "0"
    pieces: List[str] = []
    for mask, coeff in a.items():
        magnitude = abs(coeff)
        if mask == 0:
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = blade_label(a.sig, mask)
        else:
            body = f"{format_rational(magnitude)}*{blade_label(a.sig, mask)}"
        if not pieces:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f"- {body}" if coeff < 0 else f"+ {body}")
    return " ".join(pieces)

