"""Exact rational linear algebra helpers (rank, row spaces, kernels, determinants)."""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
import sympy
from sympy import Matrix, Rational

RationalLike = Union[int, Fraction, str, sympy.Rational]
RowVector = Tuple[Fraction, ...]

# Rank over GF(p) is a lower bound for the rank over Q.
MODULAR_PRIME = 32003

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def to_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, sympy.Basic) and value.is_Rational:
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"Not an exact rational: {value!r}")


def to_rational(value: RationalLike) -> sympy.Rational:
    frac = to_fraction(value)
    return Rational(frac.numerator, frac.denominator)


def parse_rational(text: str) -> Fraction:
    match = _RATIONAL_RE.match(text)
    if not match:
        raise ValueError(f"Invalid rational '{text}'. Expected 'num' or 'num/den'.")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) else 1
    if den == 0:
        raise ValueError(f"Zero denominator in '{text}'")
    return Fraction(num, den)


def format_rational(value: RationalLike) -> str:
    frac = to_fraction(value)
    if frac.denominator == 1:
        return str(frac.numerator)
    return f"{frac.numerator}/{frac.denominator}"


def rational_matrix(rows: Iterable[Sequence[RationalLike]], width: int | None = None) -> Matrix:
    rows_list = [[to_rational(x) for x in row] for row in rows]
    if not rows_list:
        return sympy.zeros(0, width or 0)
    return Matrix(rows_list)


def matrix_rank(rows: Sequence[Sequence[RationalLike]]) -> int:
    if len(rows) == 0:
        return 0
    return int(rational_matrix(rows).rank())


def row_space_basis(rows: Sequence[Sequence[RationalLike]], width: int) -> Tuple[RowVector, ...]:
    """Canonical basis (non-zero RREF rows) of the row space of ``rows``."""

    nonzero = [row for row in rows if any(to_fraction(x) != 0 for x in row)]
    if not nonzero:
        return ()
    for row in nonzero:
        if len(row) != width:
            raise ValueError(f"Row of length {len(row)} in ambient dimension {width}")
    reduced, pivots = rational_matrix(nonzero).rref()
    return tuple(
        tuple(to_fraction(reduced[i, j]) for j in range(width)) for i in range(len(pivots))
    )


def stacked_rank(first: Sequence[Sequence[RationalLike]], second: Sequence[Sequence[RationalLike]]) -> int:
    return matrix_rank(list(first) + list(second))


def subspaces_meet_trivially(first: Sequence[Sequence[RationalLike]], second: Sequence[Sequence[RationalLike]]) -> bool:
    """True iff span(first) ∩ span(second) = {0}."""

    return matrix_rank(first) + matrix_rank(second) == stacked_rank(first, second)


def subspace_contains(big: Sequence[Sequence[RationalLike]], small: Sequence[Sequence[RationalLike]]) -> bool:
    """True iff span(small) ⊆ span(big)."""

    if matrix_rank(small) == 0:
        return True
    return stacked_rank(big, small) == matrix_rank(big)


def kernel_basis(rows: Sequence[Sequence[RationalLike]], width: int) -> List[RowVector]:
    """Basis of {x : rows · x = 0} in Q^width."""

    if len(rows) == 0:
        return [tuple(Fraction(int(i == j)) for j in range(width)) for i in range(width)]
    null = rational_matrix(rows).nullspace()
    return [tuple(to_fraction(vec[j]) for j in range(width)) for vec in null]


def determinant(rows: Sequence[Sequence[RationalLike]]) -> Fraction:
    if len(rows) == 0:
        return Fraction(1)
    return to_fraction(rational_matrix(rows).det(method="bareiss"))


def modular_rank(matrix: np.ndarray, prime: int = MODULAR_PRIME) -> int:
    """Rank of an integer matrix over GF(prime), by forward elimination."""

    work = np.array(matrix, dtype=np.int64) % prime
    n_rows, n_cols = work.shape
    rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        candidates = np.nonzero(work[rank:, col])[0]
        if candidates.size == 0:
            continue
        pivot = rank + int(candidates[0])
        if pivot != rank:
            work[[rank, pivot]] = work[[pivot, rank]]
        inverse = pow(int(work[rank, col]), prime - 2, prime)
        work[rank] = (work[rank] * inverse) % prime
        below = rank + 1 + np.nonzero(work[rank + 1 :, col])[0]
        if below.size:
            factors = work[below, col][:, None]
            work[below] = (work[below] - factors * work[rank]) % prime
        rank += 1
    return rank


def certify_full_rank(matrix: np.ndarray) -> bool:
    """Exact certificate that an integer matrix has full row rank over Q."""

    n_rows = matrix.shape[0]
    if modular_rank(matrix) == n_rows:
        return True
    return matrix_rank(matrix.tolist()) == n_rows
