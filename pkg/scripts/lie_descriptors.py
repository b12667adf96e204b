"""Classical group descriptors, Cartan projection cones and the non-existence criteria built on them."""
from __future__ import annotations

import itertools
import logging
import math
import random
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from sympy.parsing.sympy_parser import (
    implicit_multiplication_application,
    parse_expr,
    standard_transformations,
)

from cck_config import get_config
from exact_linalg import (
    RowVector,
    format_rational,
    row_space_basis,
    subspace_contains,
    subspaces_meet_trivially,
    to_fraction,
)

if TYPE_CHECKING:
    from hurwitz_radon import WSubspace

logger = logging.getLogger(__name__)


class UnsupportedGroupError(NotImplementedError):
    """Raised for group families, data or subspaces outside the supported catalog structures."""


class ConeDimensionError(ValueError):
    """Raised when cones living in different ambient spaces are compared."""


class WeylRankError(MemoryError):
    """Raised when a Weyl group enumeration exceeds the configured rank bound."""


class MotionError(ValueError):
    """Raised for malformed Cartan motion group elements."""


# ---------------------------------------------------------------------------
# Group descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupStats:
    dim: int
    d: int
    rank: int
    real_rank: int
    rank_of_K: int

    @property
    def dim_of_K(self) -> int:
        return self.dim - self.d

    def __add__(self, other: "GroupStats") -> "GroupStats":
        return GroupStats(
            self.dim + other.dim,
            self.d + other.d,
            self.rank + other.rank,
            self.real_rank + other.real_rank,
            self.rank_of_K + other.rank_of_K,
        )

    def scaled(self, factor: int) -> "GroupStats":
        return GroupStats(
            self.dim * factor, self.d * factor, self.rank * factor, self.real_rank * factor, self.rank_of_K * factor
        )

    def as_dict(self) -> Dict[str, int]:
        return {
            "dim": self.dim,
            "d": self.d,
            "rank": self.rank,
            "real_rank": self.real_rank,
            "rank_of_K": self.rank_of_K,
            "dim_of_K": self.dim_of_K,
        }


ZERO_STATS = GroupStats(0, 0, 0, 0, 0)


@dataclass(frozen=True)
class GroupFactor:
    """One simple-or-reductive building block; ``multiplicity`` -1 marks a removed center."""

    family: str
    params: Tuple[int, ...] = ()
    multiplicity: int = 1

    def __str__(self) -> str:
        body = _FACTOR_RENDER[self.family](self.params)
        if self.multiplicity == 1:
            return body
        if self.multiplicity == -1:
            return f"{body}⁻¹"
        return f"{body}^{self.multiplicity}"


@dataclass(frozen=True)
class GroupDescriptor:
    factors: Tuple[GroupFactor, ...]
    text: str = ""

    def __str__(self) -> str:
        if self.text:
            return self.text
        if not self.factors:
            return "{e}"
        return "x".join(str(f) for f in self.factors)

    def __mul__(self, other: "GroupDescriptor") -> "GroupDescriptor":
        return GroupDescriptor(self.factors + other.factors, f"{self}x{other}")

    @property
    def stats(self) -> "GroupStats":
        return group_stats(self)


def _fmt_pq(params: Tuple[int, ...]) -> str:
    return ",".join(str(x) for x in params)


_FACTOR_RENDER: Dict[str, Callable[[Tuple[int, ...]], str]] = {
    "GL_R": lambda p: f"GL({p[0]},R)",
    "SL_R": lambda p: f"SL({p[0]},R)",
    "GL_C": lambda p: f"GL({p[0]},C)",
    "SL_C": lambda p: f"SL({p[0]},C)",
    "GL_H": lambda p: f"GL({p[0]},H)",
    "SL_H": lambda p: f"SL({p[0]},H)",
    "O": lambda p: f"O({_fmt_pq(p)})",
    "SO": lambda p: f"SO({_fmt_pq(p)})",
    "Spin": lambda p: f"Spin({_fmt_pq(p)})",
    "U": lambda p: f"U({_fmt_pq(p)})",
    "SU": lambda p: f"SU({_fmt_pq(p)})",
    "Sp": lambda p: f"Sp({_fmt_pq(p)})",
    "Sp_R": lambda p: f"Sp({p[0]},R)",
    "O_C": lambda p: f"O({p[0]},C)",
    "SO_C": lambda p: f"SO({p[0]},C)",
    "Sp_C": lambda p: f"Sp({p[0]},C)",
    "O_star": lambda p: f"O*({2 * p[0]})",
    "SO_star": lambda p: f"SO*({2 * p[0]})",
    "T": lambda p: f"T({p[0]})",
    "R": lambda p: f"R^{p[0]}",
}

# name -> (dim, rank, {real form index: (real_rank, rank_of_K, K text)})
_EXCEPTIONAL: Dict[str, Tuple[int, int, Dict[int, Tuple[int, int, str]]]] = {
    "G2": (14, 2, {2: (2, 2, "SO(4)")}),
    "F4": (52, 4, {4: (4, 4, "Sp(3)xSU(2)"), -20: (1, 4, "SO(9)")}),
    "E6": (78, 6, {
        6: (6, 4, "Sp(4)"),
        2: (4, 6, "SU(6)xSU(2)"),
        -14: (2, 6, "SO(10)xSO(2)"),
        -26: (2, 4, "F4"),
    }),
    "E7": (133, 7, {7: (7, 7, "SU(8)"), -5: (4, 7, "SO(12)xSU(2)"), -25: (3, 7, "E6xSO(2)")}),
    "E8": (248, 8, {8: (8, 8, "SO(16)"), -24: (4, 8, "E7xSU(2)")}),
}

for _name in _EXCEPTIONAL:
    _FACTOR_RENDER[_name] = (lambda name: lambda p: name if not p else f"{name}({p[0]})")(_name)
    _FACTOR_RENDER[f"{_name}_C"] = (lambda name: lambda p: f"{name}(C)")(_name)


def _factor_stats(factor: GroupFactor) -> GroupStats:
    fam, params = factor.family, factor.params
    if fam in ("GL_R", "SL_R"):
        (n,) = params
        stats = GroupStats(n * n, n * (n + 1) // 2, n, n, n // 2)
        if fam == "SL_R":
            stats = GroupStats(stats.dim - 1, stats.d - 1, n - 1, n - 1, n // 2)
        return stats
    if fam == "GL_C":
        (n,) = params
        return GroupStats(2 * n * n, n * n, 2 * n, n, n)
    if fam == "SL_C":
        (n,) = params
        return GroupStats(2 * n * n - 2, n * n - 1, 2 * n - 2, n - 1, n - 1)
    if fam == "GL_H":
        (n,) = params
        return GroupStats(4 * n * n, 2 * n * n - n, 2 * n, n, n)
    if fam == "SL_H":
        (n,) = params
        return GroupStats(4 * n * n - 1, 2 * n * n - n - 1, 2 * n - 1, n - 1, n)
    if fam in ("O", "SO", "Spin"):
        p, q = params
        n = p + q
        return GroupStats(n * (n - 1) // 2, p * q, n // 2, min(p, q), p // 2 + q // 2)
    if fam == "U":
        p, q = params
        n = p + q
        return GroupStats(n * n, 2 * p * q, n, min(p, q), n)
    if fam == "SU":
        p, q = params
        n = p + q
        return GroupStats(n * n - 1, 2 * p * q, n - 1, min(p, q), n - 1)
    if fam == "Sp":
        p, q = params
        n = p + q
        return GroupStats(n * (2 * n + 1), 4 * p * q, n, min(p, q), n)
    if fam == "Sp_R":
        (n,) = params
        return GroupStats(n * (2 * n + 1), n * n + n, n, n, n)
    if fam in ("O_C", "SO_C"):
        (n,) = params
        return GroupStats(n * (n - 1), n * (n - 1) // 2, 2 * (n // 2), n // 2, n // 2)
    if fam == "Sp_C":
        (n,) = params
        return GroupStats(2 * n * (2 * n + 1), n * (2 * n + 1), 2 * n, n, n)
    if fam in ("O_star", "SO_star"):
        (n,) = params
        return GroupStats(n * (2 * n - 1), n * n - n, n, n // 2, n)
    if fam == "T":
        (k,) = params
        return GroupStats(k, 0, k, 0, k)
    if fam == "R":
        (k,) = params
        return GroupStats(k, k, k, k, 0)
    if fam in _EXCEPTIONAL:
        dim, rank, forms = _EXCEPTIONAL[fam]
        if not params:
            return GroupStats(dim, 0, rank, 0, rank)
        delta = params[0]
        if delta not in forms:
            raise UnsupportedGroupError(f"No real form {fam}({delta}) in the exceptional table")
        real_rank, rank_k, _ = forms[delta]
        return GroupStats(dim, (dim + delta) // 2, rank, real_rank, rank_k)
    if fam.endswith("_C") and fam[:-2] in _EXCEPTIONAL:
        dim, rank, _ = _EXCEPTIONAL[fam[:-2]]
        return GroupStats(2 * dim, dim, 2 * rank, rank, rank)
    raise UnsupportedGroupError(f"Unknown group family '{fam}'")


def group_stats(g: Union[GroupDescriptor, str]) -> GroupStats:
    """dim, d, rank, real rank and rank of K; additive over factors (removed centers subtract)."""

    desc = parse_group(g) if isinstance(g, str) else g
    total = ZERO_STATS
    for factor in desc.factors:
        total = total + _factor_stats(factor).scaled(factor.multiplicity)
    return total


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TRANSFORMS = standard_transformations + (implicit_multiplication_application,)
_FACTOR_RE = re.compile(r"^(GL|SL|SO\*|O\*|SU\*|U\*|Spin|SO|SU|Sp|O|U|T|G2|F4|E6|E7|E8)(?:\((.*)\))?$")
_POWER_RE = re.compile(r"^(.*?)(?:²|\^(\d+))$")
_TRIVIAL = {"1", "{e}", "e", ""}


def evaluate_parameter(text: str, params: Mapping[str, int]) -> int:
    local = {name: sympy.Integer(int(value)) for name, value in params.items()}
    try:
        value = parse_expr(text.strip(), local_dict=local, transformations=_TRANSFORMS)
    except Exception as exc:
        raise UnsupportedGroupError(f"Cannot evaluate group parameter '{text}': {exc}") from exc
    value = sympy.nsimplify(value)
    if not value.is_Integer:
        raise UnsupportedGroupError(f"Group parameter '{text}' does not evaluate to an integer (got {value})")
    return int(value)


def _split_top_level(text: str, separators: str) -> List[str]:
    parts: List[str] = []
    depth = 0
    current: List[str] = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in separators:
            parts.append("".join(current))
            current = []
            continue
        current.append(ch)
    parts.append("".join(current))
    return parts


def _center_corrections(inner: Sequence[GroupFactor]) -> List[GroupFactor]:
    kinds = set()
    for factor in inner:
        if factor.family in ("GL_R", "GL_H"):
            kinds.add("R")
        elif factor.family == "U":
            kinds.add("T")
        elif factor.family == "GL_C":
            kinds.add("C")
        elif factor.family in ("O", "O_C", "O_star", "Sp", "Sp_R", "Sp_C"):
            continue
        else:
            raise UnsupportedGroupError(f"S(...) over factor {factor} is not supported")
    if len(kinds) != 1:
        raise UnsupportedGroupError(f"S(...) needs one kind of center, got {sorted(kinds) or 'none'}")
    kind = kinds.pop()
    if kind == "R":
        return [GroupFactor("R", (1,), -1)]
    if kind == "T":
        return [GroupFactor("T", (1,), -1)]
    return [GroupFactor("R", (1,), -1), GroupFactor("T", (1,), -1)]


def _parse_factor(token: str, params: Mapping[str, int]) -> List[GroupFactor]:
    token = token.strip()
    if token in _TRIVIAL:
        return []
    power = _POWER_RE.match(token)
    if power:
        base = _parse_factor(power.group(1), params)
        times = int(power.group(2)) if power.group(2) else 2
        if len(base) == 1 and base[0].family in ("R", "T") and power.group(2) and token.startswith(("R", "T")):
            # R^k and T^k are vector groups and tori, not k-fold products
            return [GroupFactor(base[0].family, (base[0].params[0] * times,), base[0].multiplicity)]
        return [GroupFactor(f.family, f.params, f.multiplicity * times) for f in base]
    if token.startswith("S(") and token.endswith(")"):
        inner: List[GroupFactor] = []
        for part in _split_top_level(token[2:-1], "x×"):
            inner.extend(_parse_factor(part, params))
        return inner + _center_corrections(inner)
    if token == "R":
        return [GroupFactor("R", (1,))]
    if token.startswith("(") and token.endswith(")"):
        return _parse_group_factors(token[1:-1], params)
    match = _FACTOR_RE.match(token)
    if not match:
        raise UnsupportedGroupError(f"Unknown group '{token}'")
    name, arg_text = match.group(1), match.group(2)
    args = [a.strip() for a in arg_text.split(",")] if arg_text is not None else []
    if name in _EXCEPTIONAL:
        if not args:
            return [GroupFactor(name)]
        if args == ["C"]:
            return [GroupFactor(f"{name}_C")]
        return [GroupFactor(name, (evaluate_parameter(args[0], params),))]
    if not args:
        raise UnsupportedGroupError(f"Group '{token}' needs parameters")
    field_ = args[-1] if args[-1] in ("R", "C", "H") else None
    nums = [evaluate_parameter(a, params) for a in (args[:-1] if field_ else args)]
    if any(x < 0 for x in nums):
        raise UnsupportedGroupError(f"Negative parameter in '{token}'")
    if name in ("GL", "SL"):
        if field_ is None or len(nums) != 1:
            raise UnsupportedGroupError(f"'{token}' must read {name}(n,R|C|H)")
        return [GroupFactor(f"{name}_{field_}", (nums[0],))]
    if name in ("U*", "SU*"):
        if len(nums) != 1 or nums[0] % 2:
            raise UnsupportedGroupError(f"'{token}' needs an even size")
        return [GroupFactor("GL_H" if name == "U*" else "SL_H", (nums[0] // 2,))]
    if name in ("O*", "SO*"):
        if len(nums) != 1 or nums[0] % 2:
            raise UnsupportedGroupError(f"'{token}' needs an even size")
        return [GroupFactor("O_star" if name == "O*" else "SO_star", (nums[0] // 2,))]
    if name == "T":
        return [GroupFactor("T", (nums[0],))]
    if field_ == "C":
        family = {"O": "O_C", "SO": "SO_C", "Spin": "SO_C", "Sp": "Sp_C"}.get(name)
        if family is None or len(nums) != 1:
            raise UnsupportedGroupError(f"Unsupported complex group '{token}'")
        return [GroupFactor(family, (nums[0],))]
    if field_ == "R":
        if name != "Sp" or len(nums) != 1:
            raise UnsupportedGroupError(f"Unsupported real group '{token}'")
        return [GroupFactor("Sp_R", (nums[0],))]
    if field_ == "H":
        raise UnsupportedGroupError(f"Unsupported quaternionic group '{token}'")
    if len(nums) == 1:
        nums = [nums[0], 0]
    if len(nums) != 2:
        raise UnsupportedGroupError(f"'{token}' needs one or two parameters")
    return [GroupFactor(name, (nums[0], nums[1]))]


def _parse_group_factors(text: str, params: Mapping[str, int]) -> List[GroupFactor]:
    factors: List[GroupFactor] = []
    for token in _split_top_level(text, "x×"):
        factors.extend(_parse_factor(token, params))
    return factors


_GROUP_PREFIX_RE = re.compile(r"(?:GL|SL|SO\*|O\*|SU\*|U\*|Spin|SO|SU|Sp|O|U|T|G2|F4|E6|E7|E8)$")


def _render_args(args: str, params: Mapping[str, int]) -> str:
    out = []
    for arg in _split_top_level(args, ","):
        arg = arg.strip()
        if arg in ("R", "C", "H") or re.fullmatch(r"-?\d+", arg):
            out.append(arg)
        else:
            out.append(str(evaluate_parameter(arg, params)))
    return ",".join(out)


def _render_with_params(text: str, params: Mapping[str, int]) -> str:
    """Substitute parameters into every group argument list, leaving the group names alone."""

    out: List[str] = []
    pos = 0
    while pos < len(text):
        start = text.find("(", pos)
        if start < 0:
            out.append(text[pos:])
            break
        depth, end = 0, start
        for end in range(start, len(text)):
            depth += {"(": 1, ")": -1}.get(text[end], 0)
            if depth == 0:
                break
        head, inner = text[pos:start], text[start + 1 : end]
        out.append(head)
        if _GROUP_PREFIX_RE.search(head):
            out.append(f"({_render_args(inner, params)})")
        else:
            out.append(f"({_render_with_params(inner, params)})")
        pos = end + 1
    return "".join(out)


def parse_group(text: str, params: Optional[Mapping[str, int]] = None) -> GroupDescriptor:
    """Parse ``"SO(4,1)xSO(3)"``, ``"S(GL(p,R)xGL(q,R))"``, ``"O(8,8)²"``, ``"E6(C)"`` ...

    Symbolic sizes are evaluated with ``params`` (``{"n": 3}``).
    """

    params = dict(params or {})
    normalized = re.sub(r"\b([EFG]\d),C\b", r"\1(C)", text.replace(" ", ""))
    factors = _parse_group_factors(normalized, params)
    return GroupDescriptor(tuple(factors), _render_with_params(normalized, params) if params else normalized)


def _factor_compact(factor: GroupFactor) -> List[GroupFactor]:
    fam, params = factor.family, factor.params
    if fam == "GL_R":
        text = f"O({params[0]})"
    elif fam == "SL_R":
        text = f"SO({params[0]})"
    elif fam == "GL_C":
        text = f"U({params[0]})"
    elif fam == "SL_C":
        text = f"SU({params[0]})"
    elif fam in ("GL_H", "SL_H"):
        text = f"Sp({params[0]})"
    elif fam in ("O", "SO", "Spin"):
        text = f"{fam}({params[0]})x{fam}({params[1]})"
    elif fam == "U":
        text = f"U({params[0]})xU({params[1]})"
    elif fam == "SU":
        text = f"S(U({params[0]})xU({params[1]}))"
    elif fam == "Sp":
        text = f"Sp({params[0]})xSp({params[1]})"
    elif fam in ("Sp_R", "O_star", "SO_star"):
        text = f"U({params[0]})"
    elif fam in ("O_C", "SO_C"):
        text = f"{'O' if fam == 'O_C' else 'SO'}({params[0]})"
    elif fam == "Sp_C":
        text = f"Sp({params[0]})"
    elif fam == "T":
        return [factor]
    elif fam == "R":
        return []
    elif fam in _EXCEPTIONAL:
        if not factor.params:
            return [factor]
        text = _EXCEPTIONAL[fam][2][factor.params[0]][2]
    elif fam.endswith("_C") and fam[:-2] in _EXCEPTIONAL:
        text = fam[:-2]
    else:
        raise UnsupportedGroupError(f"No maximal compact subgroup known for {factor}")
    return [GroupFactor(f.family, f.params, f.multiplicity * factor.multiplicity) for f in parse_group(text).factors]


def maximal_compact(g: Union[GroupDescriptor, str]) -> GroupDescriptor:
    desc = parse_group(g) if isinstance(g, str) else g
    factors: List[GroupFactor] = []
    for factor in desc.factors:
        factors.extend(_factor_compact(factor))
    return GroupDescriptor(tuple(factors))


def pseudo_riemannian_signature(G: Union[GroupDescriptor, str], H: Union[GroupDescriptor, str]) -> Tuple[int, int]:
    g, h = group_stats(G), group_stats(H)
    return g.d - h.d, g.dim - h.dim - g.d + h.d


# ---------------------------------------------------------------------------
# Weyl groups and cones
# ---------------------------------------------------------------------------

WEYL_TYPES = ("A", "BC", "D", "none")
Subspace = Tuple[RowVector, ...]


def _canonical(rows: Iterable[Sequence[object]], ambient: int) -> Subspace:
    return row_space_basis([list(r) for r in rows], ambient)


def _generators(weyl: str, ambient: int) -> List[Callable[[RowVector], RowVector]]:
    if weyl == "none" or ambient == 0:
        return []

    def swap(i: int) -> Callable[[RowVector], RowVector]:
        def act(v: RowVector) -> RowVector:
            w = list(v)
            w[i], w[i + 1] = w[i + 1], w[i]
            return tuple(w)

        return act

    gens = [swap(i) for i in range(ambient - 1)]
    if weyl == "BC":
        gens.append(lambda v: v[:-1] + (-v[-1],))
    elif weyl == "D" and ambient >= 2:
        gens.append(lambda v: v[:-2] + (-v[-1], -v[-2]))
    elif weyl not in ("A", "D"):
        raise ConeDimensionError(f"Unknown Weyl type '{weyl}'")
    return gens


@lru_cache(maxsize=4096)
def _orbit(weyl: str, ambient: int, component: Subspace) -> Tuple[Subspace, ...]:
    gens = _generators(weyl, ambient)
    seen = {component}
    queue = deque([component])
    while queue:
        current = queue.popleft()
        for g in gens:
            image = _canonical((g(row) for row in current), ambient)
            if image not in seen:
                seen.add(image)
                queue.append(image)
    return tuple(sorted(seen))


@dataclass(frozen=True)
class ConeSet:
    """A closed cone in ``a = Q^ambient`` modelled as a union of subspaces, closed under ``weyl``."""

    ambient: int
    components: Tuple[Subspace, ...]
    weyl: str = "BC"

    def __post_init__(self) -> None:
        if self.weyl not in WEYL_TYPES:
            raise ConeDimensionError(f"Unknown Weyl type '{self.weyl}'")
        for comp in self.components:
            for row in comp:
                if len(row) != self.ambient:
                    raise ConeDimensionError(f"Row of length {len(row)} in a cone of ambient {self.ambient}")

    @classmethod
    def from_rows(cls, ambient: int, components: Iterable[Iterable[Sequence[object]]], weyl: str = "BC") -> "ConeSet":
        canon = tuple(sorted({_canonical(rows, ambient) for rows in components}))
        return cls(ambient, canon or ((),), weyl)

    @classmethod
    def zero(cls, ambient: int, weyl: str = "BC") -> "ConeSet":
        return cls(ambient, ((),), weyl)

    @classmethod
    def full(cls, ambient: int, weyl: str = "BC") -> "ConeSet":
        rows = [[int(i == j) for j in range(ambient)] for i in range(ambient)]
        return cls.from_rows(ambient, [rows], weyl)

    @classmethod
    def line(cls, vector: Sequence[object], weyl: str = "BC") -> "ConeSet":
        return cls.from_rows(len(vector), [[vector]], weyl)

    @property
    def is_zero(self) -> bool:
        return all(len(comp) == 0 for comp in self.components)

    @property
    def dimension(self) -> int:
        return max((len(comp) for comp in self.components), default=0)

    def expanded(self) -> Tuple[Subspace, ...]:
        out = set()
        for comp in self.components:
            out.update(_orbit(self.weyl, self.ambient, comp))
        return tuple(sorted(out))

    def with_weyl(self, weyl: str) -> "ConeSet":
        return ConeSet(self.ambient, self.components, weyl)

    def to_json(self) -> Dict[str, object]:
        return {
            "ambient": self.ambient,
            "weyl": self.weyl,
            "components": [[[format_rational(x) for x in row] for row in comp] for comp in self.components],
        }

    @classmethod
    def from_json(cls, payload: Mapping[str, object]) -> "ConeSet":
        ambient = int(payload["ambient"])
        comps = [[[to_fraction(x) for x in row] for row in comp] for comp in payload.get("components", [])]
        return cls.from_rows(ambient, comps, str(payload.get("weyl", "BC")))

    def __str__(self) -> str:
        def comp_text(comp: Subspace) -> str:
            if not comp:
                return "{0}"
            return "span{" + ", ".join("(" + ",".join(format_rational(x) for x in row) + ")" for row in comp) + "}"

        prefix = "" if self.weyl == "none" else f"W[{self.weyl}]·"
        return prefix + " ∪ ".join(comp_text(c) for c in self.components)


def _expanded_pair(A: ConeSet, B: ConeSet) -> Tuple[Tuple[Subspace, ...], Tuple[Subspace, ...]]:
    if A.ambient != B.ambient:
        raise ConeDimensionError(f"Cones live in Q^{A.ambient} and Q^{B.ambient}")
    weyls = {A.weyl, B.weyl} - {"none"}
    if len(weyls) > 1:
        raise ConeDimensionError(f"Cones closed under different Weyl groups {sorted(weyls)}")
    weyl = weyls.pop() if weyls else "none"
    return A.with_weyl(weyl).expanded(), B.with_weyl(weyl).expanded()


def cones_properly_disjoint(A: ConeSet, B: ConeSet) -> bool:
    """``A ∩ B = {0}`` over the full Weyl orbits."""

    comps_a, comps_b = _expanded_pair(A, B)
    for ca in comps_a:
        if not ca:
            continue
        for cb in comps_b:
            if cb and not subspaces_meet_trivially(ca, cb):
                logger.debug("Cones meet: %s and %s", ca, cb)
                return False
    return True


def _covered(small: Tuple[Subspace, ...], big: Tuple[Subspace, ...]) -> bool:
    return all(not s or any(subspace_contains(b, s) for b in big if b) for s in small)


def cone_contained(small: ConeSet, big: ConeSet) -> bool:
    comps_small, comps_big = _expanded_pair(small, big)
    return _covered(comps_small, comps_big)


def cones_similar(A: ConeSet, B: ConeSet) -> bool:
    comps_a, comps_b = _expanded_pair(A, B)
    if A.is_zero or B.is_zero:
        return A.is_zero and B.is_zero
    return _covered(comps_a, comps_b) and _covered(comps_b, comps_a)


def coordinate_subspaces(ambient: int, dim: int, weyl: str = "BC") -> ConeSet:
    if dim < 0 or dim > ambient:
        raise ConeDimensionError(f"No {dim}-dimensional coordinate subspaces in Q^{ambient}")
    if dim == 0:
        return ConeSet.zero(ambient, weyl)
    comps = [
        [[int(j == i) for j in range(ambient)] for i in chosen]
        for chosen in itertools.combinations(range(ambient), dim)
    ]
    return ConeSet.from_rows(ambient, comps, weyl)


def cone_a_of_orthogonal_subgroup(r: int, s: int, p: int, q: int) -> ConeSet:
    """a(O(r,s)) inside a(O(p,q)) = Q^min(p,q): all coordinate subspaces of dimension min(r,s)."""

    if r > p or s > q or min(r, s) < 0:
        raise ConeDimensionError(f"O({r},{s}) does not sit in O({p},{q}) blockwise")
    return coordinate_subspaces(min(p, q), min(r, s))


def cone_a_of_block_subgroup(blocks: Sequence[Tuple[int, int]], p: int, q: int) -> ConeSet:
    """a(O(r₁,s₁)×O(r₂,s₂)×...) inside a(O(p,q))."""

    if sum(b[0] for b in blocks) > p or sum(b[1] for b in blocks) > q:
        raise ConeDimensionError(f"Blocks {list(blocks)} do not fit in O({p},{q})")
    return coordinate_subspaces(min(p, q), sum(min(r, s) for r, s in blocks))


def weyl_group_order(root_type: str, n: int) -> int:
    if root_type == "A":
        return math.factorial(n + 1)
    if root_type in ("B", "C", "BC"):
        return 2 ** n * math.factorial(n)
    if root_type == "D":
        return 2 ** max(n - 1, 0) * math.factorial(n)
    raise UnsupportedGroupError(f"No Weyl group of type '{root_type}'")


def weyl_group_elements(root_type: str, n: int) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Signed permutations ``(perm, signs)`` acting by ``x ↦ (signs[i]·x[perm[i]])``."""

    limit = get_config().weyl_rank_limit
    if n > limit:
        raise WeylRankError(f"Weyl group of rank {n} exceeds the enumeration bound {limit}")
    if root_type == "A":
        for perm in itertools.permutations(range(n + 1)):
            yield perm, (1,) * (n + 1)
        return
    if root_type not in ("B", "C", "BC", "D"):
        raise UnsupportedGroupError(f"No Weyl group of type '{root_type}'")
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            if root_type == "D" and signs.count(-1) % 2:
                continue
            yield perm, signs


def apply_weyl_element(element: Tuple[Tuple[int, ...], Tuple[int, ...]], vector: Sequence[object]) -> RowVector:
    perm, signs = element
    return tuple(signs[i] * to_fraction(vector[perm[i]]) for i in range(len(perm)))


# ---------------------------------------------------------------------------
# Obstruction criteria
# ---------------------------------------------------------------------------


def calabi_markus(G: Union[GroupDescriptor, str], H: Union[GroupDescriptor, str]) -> bool:
    """True when only finite groups act properly discontinuously on G/H."""

    return group_stats(G).real_rank == group_stats(H).real_rank


def maximality_obstruction(aH: ConeSet, dH: int, aL: ConeSet, dL: int) -> bool:
    if aL.is_zero:
        return False
    return dL > dH and cone_contained(aL, aH)


def rank_parity_obstruction(
    G: Union[GroupDescriptor, str],
    H: Union[GroupDescriptor, str],
    h_cap_k: Union[GroupDescriptor, str, None] = None,
) -> bool:
    """rank G = rank H and rank K > rank H∩K; H∩K defaults to the maximal compact subgroup of H."""

    g = parse_group(G) if isinstance(G, str) else G
    h = parse_group(H) if isinstance(H, str) else H
    if h_cap_k is None:
        h_cap_k = maximal_compact(h)
    hk = group_stats(h_cap_k)
    gs, hs = group_stats(g), group_stats(h)
    return gs.rank == hs.rank and gs.rank_of_K > hk.rank


def b_plus(root_type: str, n: int) -> Tuple[int, Tuple[RowVector, ...]]:
    """``(ambient, spanning rows)`` of ``{X ∈ a : w₀X = -X}``."""

    if n < 1:
        raise ConeDimensionError(f"Rank must be positive, got {n}")
    if root_type == "A":
        ambient = n + 1
        rows = [
            tuple(Fraction(int(j == i) - int(j == ambient - 1 - i)) for j in range(ambient))
            for i in range(ambient // 2)
        ]
        return ambient, tuple(rows)
    if root_type in ("B", "C", "BC") or (root_type == "D" and n % 2 == 0):
        return n, tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    if root_type == "D":
        return n, tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n - 1))
    raise UnsupportedGroupError(f"b₊ is only computed for classical types, got '{root_type}'")


_WEYL_OF_ROOT_TYPE = {"A": "A", "B": "BC", "C": "BC", "BC": "BC", "D": "D"}


def benoist_obstruction(root_type: str, n: int, aH: ConeSet) -> bool:
    """True when ``b₊ ⊂ w·a_H`` for some Weyl element w."""

    limit = get_config().weyl_rank_limit
    if n > limit:
        raise WeylRankError(f"Weyl group of rank {n} exceeds the enumeration bound {limit}")
    if root_type not in _WEYL_OF_ROOT_TYPE:
        raise UnsupportedGroupError(f"No b₊ criterion for root type '{root_type}'")
    ambient, rows = b_plus(root_type, n)
    if aH.ambient != ambient:
        raise ConeDimensionError(f"a_H lives in Q^{aH.ambient}, type {root_type}{n} needs Q^{ambient}")
    if len(aH.components) != 1:
        raise UnsupportedGroupError("b₊ containment is only defined for a single-subspace a_H")
    comp = aH.components[0]
    if len(comp) < len(rows):
        return False
    return any(subspace_contains(image, rows) for image in _orbit(_WEYL_OF_ROOT_TYPE[root_type], ambient, comp))


# ---------------------------------------------------------------------------
# Pseudo-Riemannian Grassmannians O(i+j,k+l)/O(i,k)×O(j,l)
# ---------------------------------------------------------------------------


def normalize_grassmannian(i: int, j: int, k: int, l: int) -> Tuple[int, int, int, int]:
    """Image of (i,j,k,l) under the symmetries of the quotient with the smallest entry first."""

    images = [(i, j, k, l), (j, i, l, k), (k, l, i, j), (l, k, j, i)]
    return min(images)


def grassmannian_descriptors(i: int, j: int, k: int, l: int) -> Tuple[GroupDescriptor, GroupDescriptor]:
    G = parse_group(f"O({i + j},{k + l})")
    H = parse_group(f"O({i},{k})xO({j},{l})")
    return G, H


def grassmannian_inequality_obstruction(i: int, j: int, k: int, l: int) -> bool:
    """Closed form: with i minimal and j,k,l > 0, compact forms need i = 0 and l ≤ j - k."""

    i, j, k, l = normalize_grassmannian(i, j, k, l)
    if min(j, k, l) <= 0:
        return False
    return not (i == 0 and 0 < l <= j - k)


def grassmannian_parity_obstruction(i: int, j: int, k: int, l: int) -> bool:
    entries = (i, j, k, l)
    for pos, value in enumerate(entries):
        if value == 0:
            others = entries[:pos] + entries[pos + 1 :]
            if all(x % 2 for x in others):
                return True
    return False


def grassmannian_obstructions(i: int, j: int, k: int, l: int) -> Dict[str, bool]:
    """Each criterion evaluated through group data and cones, with i normalized to the minimum."""

    i, j, k, l = normalize_grassmannian(i, j, k, l)
    G, H = grassmannian_descriptors(i, j, k, l)
    g, h = group_stats(G), group_stats(H)
    p, q = i + j, k + l
    aH = cone_a_of_block_subgroup([(i, k), (j, l)], p, q)
    out = {"calabi_markus": calabi_markus(G, H) and g.d > h.d}
    L1 = parse_group(f"O({i + j},{i + l})")
    out["maximality_L1"] = maximality_obstruction(
        aH, h.d, cone_a_of_orthogonal_subgroup(i + j, i + l, p, q), group_stats(L1).d
    )
    if l <= j:
        L2 = parse_group(f"O({i + l},{k + l})")
        out["maximality_L2"] = maximality_obstruction(
            aH, h.d, cone_a_of_orthogonal_subgroup(i + l, k + l, p, q), group_stats(L2).d
        )
    else:
        out["maximality_L2"] = False
    out["rank_parity"] = rank_parity_obstruction(G, H)
    return out


# ---------------------------------------------------------------------------
# Cartan motion groups
# ---------------------------------------------------------------------------


def _as_matrix(value: object) -> sympy.Matrix:
    return sympy.Matrix(value).applyfunc(lambda x: sympy.nsimplify(sympy.sympify(x)))


@dataclass(frozen=True, eq=False)
class MotionElement:
    """``(k, v) ∈ K ⋉ V`` with ``(k₁,v₁)(k₂,v₂) = (k₁k₂, v₁ + k₁v₂)``."""

    k: sympy.Matrix
    v: sympy.Matrix

    def __post_init__(self) -> None:
        k = _as_matrix(self.k)
        v = _as_matrix(self.v)
        if v.shape[1] != 1:
            v = v.reshape(len(v), 1)
        if not k.is_square or k.shape[0] != v.shape[0]:
            raise MotionError(f"k is {k.shape}, v has length {v.shape[0]}")
        if k.T * k != sympy.eye(k.shape[0]):
            raise MotionError("k is not orthogonal")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "v", v)

    @classmethod
    def identity(cls, n: int) -> "MotionElement":
        return cls(sympy.eye(n), sympy.zeros(n, 1))

    @classmethod
    def translation(cls, v: Sequence[object]) -> "MotionElement":
        return cls(sympy.eye(len(v)), list(v))

    @property
    def dim(self) -> int:
        return self.k.shape[0]

    def __mul__(self, other: "MotionElement") -> "MotionElement":
        return MotionElement(self.k * other.k, self.v + self.k * other.v)

    def __pow__(self, exponent: int) -> "MotionElement":
        result = MotionElement.identity(self.dim)
        base = self
        while exponent > 0:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MotionElement):
            return NotImplemented
        return self.k == other.k and self.v == other.v

    def __hash__(self) -> int:
        return hash((tuple(self.k), tuple(self.v)))

    def fixed_center(self) -> sympy.Matrix:
        """u with v = (k - I)u, u ⟂ ker(k - I); exists when v ⟂ ker(k - I)."""

        shift = self.k - sympy.eye(self.dim)
        u = shift.pinv() * self.v
        if shift * u != self.v:
            raise MotionError("Translation part has a component along the fixed space of k")
        return u

    def to_json(self) -> Dict[str, object]:
        return {
            "k": [[format_rational(to_fraction(x)) for x in self.k.row(i)] for i in range(self.dim)],
            "v": [format_rational(to_fraction(x)) for x in self.v],
        }

    def __repr__(self) -> str:
        return f"MotionElement(k={self.to_json()['k']}, v={self.to_json()['v']})"


def _fixed_projection(k: sympy.Matrix) -> sympy.Matrix:
    n = k.shape[0]
    basis = (k - sympy.eye(n)).nullspace()
    if not basis:
        return sympy.zeros(n, n)
    B = sympy.Matrix.hstack(*basis)
    return B * (B.T * B).inv() * B.T


def jordan_decompose_motion(g: MotionElement) -> Tuple[MotionElement, MotionElement]:
    """g = s·w = w·s with s elliptic and w a translation along the fixed space of k."""

    v1 = _fixed_projection(g.k) * g.v
    v2 = g.v - v1
    s = MotionElement(g.k, v2)
    w = MotionElement(sympy.eye(g.dim), v1)
    return s, w


def motion_cone_a(W: "WSubspace") -> ConeSet:
    """a(W) ⊂ diagonal profiles for the structured W used by the tangential space forms."""

    from hurwitz_radon import norm_identity_holds

    ambient = W.cols
    nonzero = [b for b in W.basis if any(x != 0 for row in b for x in row)]
    if not nonzero:
        return ConeSet.zero(ambient)
    if len(nonzero) == len(W.basis) and norm_identity_holds(W):
        return ConeSet.line([1] * ambient)
    if W.dim == 1:
        (b,) = W.basis
        gram = [
            [sum((to_fraction(b[r][i]) * to_fraction(b[r][j]) for r in range(W.rows)), Fraction(0)) for j in range(ambient)]
            for i in range(ambient)
        ]
        if all(gram[i][j] == 0 for i in range(ambient) for j in range(ambient) if i != j):
            profile = [_exact_sqrt(gram[i][i]) for i in range(ambient)]
            if all(x is not None for x in profile):
                return ConeSet.line(profile)
    raise UnsupportedGroupError("Cartan projection of an unstructured W; use check_W_proper instead")


def _exact_sqrt(value: Fraction) -> Optional[Fraction]:
    num, den = math.isqrt(value.numerator), math.isqrt(value.denominator)
    if num * num == value.numerator and den * den == value.denominator:
        return Fraction(num, den)
    return None


# ---------------------------------------------------------------------------
# Sampling oracle for cone disjointness
# ---------------------------------------------------------------------------


def _integer_rows(comp: Subspace) -> np.ndarray:
    rows = []
    for row in comp:
        scale = math.lcm(*(x.denominator for x in row))
        rows.append([int(x * scale) for x in row])
    return np.array(rows, dtype=np.int64)


def _close_points_unbounded(U: Subspace, V: Subspace, radius: int) -> bool:
    """Does ``{x ∈ U : dist(x, V) ≤ radius}`` reach the outer half of the lattice box?"""

    if not U:
        return False
    N = 5 * radius
    basis_u = _integer_rows(U)
    coeffs = np.array(list(itertools.product(range(-N, N + 1), repeat=len(U))), dtype=np.int64)
    outer = np.abs(coeffs).max(axis=1) * 2 > N
    points = coeffs[outer] @ basis_u
    norms = (points * points).sum(axis=1)
    if not V:
        dist_scaled = norms
        scale = 1
    else:
        basis_v = _integer_rows(V)
        gram = sympy.Matrix(basis_v.tolist()) * sympy.Matrix(basis_v.tolist()).T
        scale = int(gram.det())
        adj = np.array(gram.adjugate().tolist(), dtype=np.int64)
        proj = basis_v.T @ adj @ basis_v
        dist_scaled = scale * norms - np.einsum("ij,jk,ik->i", points, proj, points)
    return bool((dist_scaled <= radius * radius * scale).any())


def sampling_disjointness_oracle(A: ConeSet, B: ConeSet, radius: int = 2, rng: Optional[random.Random] = None) -> bool:
    """Lattice-box estimate of ``A ∩ B = {0}``: every near-B part of A must stay bounded.

    The lower-dimensional component is sampled on integer coefficient points of a box of side
    ``10·radius``; ``rng`` shuffles the pair order only.
    """

    comps_a, comps_b = _expanded_pair(A, B)
    pairs = [(ca, cb) for ca in comps_a for cb in comps_b]
    if rng is not None:
        rng.shuffle(pairs)
    for ca, cb in pairs:
        U, V = (ca, cb) if len(ca) <= len(cb) else (cb, ca)
        if _close_points_unbounded(U, V, radius):
            return False
    return True
