"""Named symmetric spaces, compact-form triples and obstruction tables, with the decision pipeline over them."""
from __future__ import annotations

import concurrent.futures
import json
import logging
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import sympy
from sympy.parsing.sympy_parser import (
    implicit_multiplication_application,
    parse_expr,
    standard_transformations,
)

from cck_config import get_config
from cck_models import CatalogFile, ConeRecipe, DecisionRecord, SymmetricSpaceEntry
from cck_schema import (
    CITED,
    CRITERION_BENOIST,
    CRITERION_CALABI_MARKUS,
    CRITERION_COMPACT,
    CRITERION_HURWITZ_RADON,
    CRITERION_LATTICE,
    CRITERION_MAXIMALITY,
    CRITERION_NONE,
    CRITERION_RANK_PARITY,
    CRITERION_SPIN_TRIPLE,
    CRITERION_TABLE,
    CRITERION_TRIPLE,
    CRITERION_UNIFORM_LATTICE,
    DERIVED,
    EXISTS,
    FAIL,
    INCOMPLETE,
    NOT_EXISTS,
    OPEN,
    PASS,
    TABLE_BENOIST,
    TABLE_COMPACT_FORMS,
    TABLE_MAXIMALITY,
    TABLE_PARA_HERMITIAN,
    TABLE_RANK_PARITY,
    TABLE_SPIN_TRIPLES,
    ReportRow,
    TableReport,
    TripleReport,
)
from clifford_core import CliffordDomainError, MultiVector, Signature
from clifford_morphisms import (
    MINUS_2,
    AlgebraMorphism,
    EvenReduction,
    build_real_rep,
    classify_group,
    even_reduction,
    hyperbolic_tower,
    phi_K,
    verify_clifford_table,
    verify_group_table,
)
from exact_linalg import certify_full_rank, format_rational, kernel_basis, row_space_basis, to_fraction
from hurwitz_radon import HurwitzRadonError, bilinear_map, construction_data, existence_chain, rho
from lie_descriptors import (
    ConeSet,
    GroupDescriptor,
    UnsupportedGroupError,
    WeylRankError,
    benoist_obstruction,
    calabi_markus,
    cone_a_of_block_subgroup,
    cone_a_of_orthogonal_subgroup,
    cones_properly_disjoint,
    cones_similar,
    coordinate_subspaces,
    evaluate_parameter,
    grassmannian_descriptors,
    grassmannian_inequality_obstruction,
    grassmannian_obstructions,
    grassmannian_parity_obstruction,
    group_stats,
    maximality_obstruction,
    normalize_grassmannian,
    parse_group,
    rank_parity_obstruction,
)

logger = logging.getLogger(__name__)

_TRANSFORMS = standard_transformations + (implicit_multiplication_application,)

FaultInjection = Optional[Mapping[str, str]]


class CatalogError(KeyError):
    """Raised when a space is not in the catalog."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown space"


# ---------------------------------------------------------------------------
# Loading and lookup
# ---------------------------------------------------------------------------


def normalize_space_name(text: str) -> str:
    text = text.replace(" ", "").replace("×", "x")
    return re.sub(r"\b([EFG]\d),C\b", r"\1(C)", text)


@dataclass(frozen=True, eq=False)
class Catalog:
    entries: Tuple[SymmetricSpaceEntry, ...]
    path: str = ""
    _index: Dict[str, SymmetricSpaceEntry] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        for entry in self.entries:
            for name in (entry.name, *entry.aliases):
                key = normalize_space_name(name)
                if key in self._index and self._index[key].id != entry.id:
                    raise ValueError(f"Catalog name '{name}' is used by {self._index[key].id} and {entry.id}")
                self._index[key] = entry

    def find(self, name: str) -> SymmetricSpaceEntry:
        entry = self._index.get(normalize_space_name(name))
        if entry is None:
            raise CatalogError(f"Unknown space '{name}'")
        return entry

    def by_id(self, entry_id: str) -> SymmetricSpaceEntry:
        for entry in self.entries:
            if entry.id == entry_id:
                return entry
        raise CatalogError(f"Unknown catalog id '{entry_id}'")

    def table(self, table: str) -> List[SymmetricSpaceEntry]:
        return sorted((e for e in self.entries if e.table == table), key=lambda e: e.row)

    def names(self) -> List[str]:
        return [entry.name for entry in self.entries]


@lru_cache(maxsize=8)
def _load_catalog_cached(path: str) -> Catalog:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    parsed = CatalogFile.model_validate(payload)
    logger.debug("Loaded %d catalog entries from %s", len(parsed.entries), path)
    return Catalog(tuple(parsed.entries), path)


def load_catalog(path: Optional[str] = None) -> Catalog:
    return _load_catalog_cached(str(path or get_config().catalog_path))


# ---------------------------------------------------------------------------
# Instantiating parametrized families
# ---------------------------------------------------------------------------


def condition_holds(text: str, params: Mapping[str, int]) -> bool:
    local = {name: sympy.Integer(value) for name, value in params.items()}
    result = parse_expr(text, local_dict=local, transformations=_TRANSFORMS)
    if result not in (sympy.true, sympy.false):
        raise ValueError(f"Condition '{text}' does not evaluate to true/false with {dict(params)}")
    return bool(result)


@dataclass(frozen=True)
class Instance:
    """One member of a catalog family with all group sizes substituted."""

    entry: SymmetricSpaceEntry
    params: Tuple[Tuple[str, int], ...]
    G: GroupDescriptor
    H: GroupDescriptor
    L: Optional[GroupDescriptor] = None
    h_cap_k: Optional[GroupDescriptor] = None

    @property
    def name(self) -> str:
        return f"{self.G}/{self.H}"

    @property
    def param_dict(self) -> Dict[str, int]:
        return dict(self.params)

    @property
    def label(self) -> str:
        if not self.params:
            return self.entry.id
        return f"{self.entry.id}[" + ",".join(f"{k}={v}" for k, v in self.params) + "]"

    def d_of(self, role: str, fault_injection: FaultInjection = None) -> int:
        """d of G, H or L; ``fault_injection`` maps a template such as ``"Sp(1,n)"`` to a replacement d."""

        template = getattr(self.entry, role)
        if fault_injection and template in fault_injection:
            value = evaluate_parameter(fault_injection[template], self.param_dict)
            logger.debug("Fault injection: d(%s) := %d in %s", template, value, self.label)
            return value
        return group_stats(getattr(self, role)).d


def instantiate(entry: SymmetricSpaceEntry, params: Optional[Mapping[str, int]] = None) -> Instance:
    given = dict(params or {})
    unknown = set(given) - set(entry.params)
    if unknown:
        raise ValueError(f"{entry.name} has no parameter(s) {sorted(unknown)}; expected {sorted(entry.params)}")
    values = {**entry.params, **given}
    for name, minimum in entry.params.items():
        if values[name] < minimum:
            raise ValueError(f"{entry.name}: {name} = {values[name]} is below the family minimum {minimum}")
    for name, expr in entry.derived.items():
        values[name] = evaluate_parameter(expr, values)
    for cond in entry.conditions:
        if not condition_holds(cond, values):
            raise ValueError(f"{entry.name}: parameters {values} violate '{cond}'")
    G = parse_group(entry.G, values)
    H = parse_group(entry.H, values)
    L = parse_group(entry.L, values) if entry.L else None
    hk = parse_group(entry.h_cap_k, values) if entry.h_cap_k else None
    if group_stats(H).d > group_stats(G).d:
        raise ValueError(f"{entry.name}: d(H) > d(G) for {values}")
    ordered = tuple(sorted((k, v) for k, v in values.items() if k in entry.params))
    return Instance(entry, ordered, G, H, L, hk)


def iter_instances(entry: SymmetricSpaceEntry) -> List[Instance]:
    if not entry.params:
        return [instantiate(entry)]
    samples = entry.samples or [dict(entry.params)]
    return [instantiate(entry, sample) for sample in samples]


def _unit_rows(ambient: int, indices: Iterable[int]) -> List[List[int]]:
    return [[int(j == i) for j in range(ambient)] for i in indices]


def _difference_rows(ambient: int, pairs: Iterable[Tuple[int, int]]) -> List[List[int]]:
    return [[int(j == a) - int(j == b) for j in range(ambient)] for a, b in pairs]


def hyperplane_cone(normal: Sequence[object], weyl: str = "BC") -> ConeSet:
    ambient = len(normal)
    rows = kernel_basis([[to_fraction(x) for x in normal]], ambient)
    return ConeSet.from_rows(ambient, [rows], weyl)


def build_cone(recipe: ConeRecipe, params: Mapping[str, int]) -> ConeSet:
    """Materialize a cone recipe from the catalog for concrete parameters."""

    def ev(text: Optional[str]) -> int:
        if text is None:
            raise ValueError(f"Cone recipe '{recipe.kind}' is missing a size")
        return evaluate_parameter(text, params)

    kind, weyl = recipe.kind, recipe.weyl
    if kind == "orthogonal":
        return cone_a_of_orthogonal_subgroup(ev(recipe.r), ev(recipe.s), ev(recipe.p), ev(recipe.q)).with_weyl(weyl)
    if kind == "block":
        blocks = [(ev(a), ev(b)) for a, b in recipe.blocks or []]
        return cone_a_of_block_subgroup(blocks, ev(recipe.p), ev(recipe.q)).with_weyl(weyl)
    if kind == "coordinate":
        return coordinate_subspaces(ev(recipe.ambient), ev(recipe.dim), weyl)
    if kind == "constant_line":
        return ConeSet.line([ev(recipe.value)] * ev(recipe.ambient), weyl)
    if kind == "line":
        return ConeSet.line([to_fraction(x) for x in recipe.vector or []], weyl)
    if kind == "split_pairs":
        pairs = ev(recipe.pairs)
        ambient = ev(recipe.ambient) if recipe.ambient else 2 * pairs
        return ConeSet.from_rows(ambient, [_difference_rows(ambient, ((2 * i, 2 * i + 1) for i in range(pairs)))], weyl)
    if kind == "antidiagonal":
        ambient, pairs = ev(recipe.ambient), ev(recipe.pairs)
        return ConeSet.from_rows(ambient, [_difference_rows(ambient, ((i, ambient - 1 - i) for i in range(pairs)))], weyl)
    if kind == "leading":
        ambient, dim = ev(recipe.ambient), ev(recipe.dim)
        if dim == 0:
            return ConeSet.zero(ambient, weyl)
        return ConeSet.from_rows(ambient, [_unit_rows(ambient, range(dim))], weyl)
    if kind == "full":
        return ConeSet.full(ev(recipe.ambient), weyl)
    if kind == "hyperplane_orbit":
        return hyperplane_cone(recipe.normal or [], weyl)
    if kind == "literal":
        comps = [[[to_fraction(x) for x in row] for row in comp] for comp in recipe.components or []]
        ambient = ev(recipe.ambient) if recipe.ambient else len(comps[0][0])
        return ConeSet.from_rows(ambient, comps, weyl)
    raise ValueError(f"Unknown cone recipe kind '{kind}'")


def instance_cones(inst: Instance) -> Tuple[Optional[ConeSet], Optional[ConeSet]]:
    params = {**inst.param_dict, **_derived_values(inst)}
    aH = build_cone(inst.entry.aH, params) if inst.entry.aH else None
    aL = build_cone(inst.entry.aL, params) if inst.entry.aL else None
    return aH, aL


def _derived_values(inst: Instance) -> Dict[str, int]:
    values = inst.param_dict
    out: Dict[str, int] = {}
    for name, expr in inst.entry.derived.items():
        out[name] = evaluate_parameter(expr, {**values, **out})
    return out


# ---------------------------------------------------------------------------
# Triples (G, H, L)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TripleEntry:
    """A candidate compact-form triple: L acts properly and cocompactly on G/H when the check passes."""

    space: str
    G: GroupDescriptor
    H: GroupDescriptor
    L: GroupDescriptor
    aH: Optional[ConeSet] = None
    aL: Optional[ConeSet] = None
    provenance: Tuple[str, ...] = ()
    flags: Tuple[str, ...] = ()
    d_overrides: Tuple[Tuple[str, int], ...] = ()

    @classmethod
    def from_instance(cls, inst: Instance, fault_injection: FaultInjection = None) -> "TripleEntry":
        if inst.L is None:
            raise ValueError(f"{inst.entry.name} carries no subgroup L")
        aH, aL = instance_cones(inst)
        overrides = tuple(
            (role, inst.d_of(role, fault_injection))
            for role in ("G", "H", "L")
            if fault_injection and getattr(inst.entry, role) in fault_injection
        )
        return cls(
            space=inst.name,
            G=inst.G,
            H=inst.H,
            L=inst.L,
            aH=aH,
            aL=aL,
            provenance=tuple(inst.entry.provenance_tags()),
            flags=tuple(inst.entry.flags),
            d_overrides=overrides,
        )

    def d(self, role: str) -> int:
        overrides = dict(self.d_overrides)
        if role in overrides:
            return overrides[role]
        return group_stats(getattr(self, role)).d


def check_triple(t: TripleEntry) -> TripleReport:
    """Cone disjointness of a(H), a(L) and d(L) + d(H) = d(G); missing cone data is Incomplete."""

    if t.aH is None or t.aL is None:
        cones = "unavailable"
    else:
        cones = "disjoint" if cones_properly_disjoint(t.aH, t.aL) else "meet"
    detail: Dict[str, Any] = {}
    if t.aH is not None:
        detail["aH"] = t.aH.to_json()
    if t.aL is not None:
        detail["aL"] = t.aL.to_json()
    report = TripleReport(
        space=t.space,
        L=str(t.L),
        d_G=t.d("G"),
        d_H=t.d("H"),
        d_L=t.d("L"),
        cones=cones,
        provenance=list(t.provenance),
        flags=list(t.flags),
        detail=detail,
    )
    logger.debug("check_triple %s with L=%s: %s", t.space, t.L, report.status)
    return report


def _spin_entry(q: int, catalog: Catalog) -> SymmetricSpaceEntry:
    for entry in catalog.table(TABLE_SPIN_TRIPLES):
        if entry.spin_q == q:
            return entry
    raise CatalogError(f"No Spin(1,{q}) row in the catalog")


def check_spin_triple(q: int, catalog: Optional[Catalog] = None, fault_injection: FaultInjection = None) -> TripleReport:
    """Spin(1,q) ⊂ G(1,q): invertibility certificate for ι(v₁⁺v₁⁻) plus the d-sum."""

    if not 1 <= q <= 8:
        raise CliffordDomainError(f"Spin triples are tabulated for 1 <= q <= 8, got {q}")
    catalog = catalog or load_catalog()
    entry = _spin_entry(q, catalog)
    inst = instantiate(entry)

    sig = Signature(1, q)
    reduction = even_reduction(sig)
    rep = build_real_rep(reduction.target)
    x0 = MultiVector.generator(sig, "+", 1) * MultiVector.generator(sig, "-", 1)
    image = rep.represent(reduction.apply(x0))
    det = int(image.det(method="bareiss"))
    square_ok = image * image == sympy.eye(rep.size)
    label = classify_group(sig).label
    certificate_ok = det != 0 and square_ok and label == entry.G

    report = TripleReport(
        space=inst.name,
        L=str(inst.L),
        d_G=inst.d_of("G", fault_injection),
        d_H=inst.d_of("H", fault_injection),
        d_L=inst.d_of("L", fault_injection),
        cones="certificate" if certificate_ok else "certificate_failed",
        provenance=entry.provenance_tags(),
        flags=list(entry.flags),
        detail={"det": det, "square_is_identity": bool(square_ok), "G_label": label, "rep_size": rep.size},
    )
    logger.debug("check_spin_triple q=%d: det=%d, %s", q, det, report.status)
    return report


# ---------------------------------------------------------------------------
# SO(8,C)/SO(7,1)
# ---------------------------------------------------------------------------


@dataclass
class O8CReport:
    checks: Dict[str, bool]
    torus_images: Tuple[Optional[Tuple[int, ...]], ...]
    signs: Tuple[int, ...]
    normal: Tuple[Fraction, ...]
    aH: ConeSet
    aL: ConeSet
    d: Tuple[int, int, int]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def as_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "checks": dict(self.checks),
            "torus_images": [list(c) if c is not None else None for c in self.torus_images],
            "signs": list(self.signs),
            "normal": [format_rational(x) for x in self.normal],
            "aH": self.aH.to_json(),
            "aL": self.aL.to_json(),
            "d": {"G": self.d[0], "H": self.d[1], "L": self.d[2]},
        }


O8C_PAIRS = ((1, 2), (5, 6), (4, 7))
# t-coordinates of the images of O8C_PAIRS in the basis f_k = E_{2k,2k-1} - E_{2k-1,2k}
O8C_TORUS_POINTS = ((1, 1, 1, 1), (1, -1, 1, -1), (1, -1, -1, 1))


def torus_matrix(coords: Sequence[int]) -> np.ndarray:
    """``Σ c_k f_k``: block diagonal with ``c_k J`` in the k-th 2×2 block."""

    return np.kron(np.diag([int(c) for c in coords]).astype(np.int64), MINUS_2)


def torus_coordinates(matrix: np.ndarray) -> Optional[Tuple[int, ...]]:
    """The coordinates of ``matrix`` in the f_k basis, or None when it leaves the torus."""

    blocks = matrix.shape[0] // 2
    coords = tuple(int(matrix[2 * k + 1, 2 * k]) for k in range(blocks))
    return coords if np.array_equal(matrix, torus_matrix(coords)) else None


def _integer_matrix(matrix: Any) -> np.ndarray:
    values = [[to_fraction(x) for x in row] for row in np.asarray(matrix).tolist()]
    if any(x.denominator != 1 for row in values for x in row):
        raise ValueError("expected an integral matrix")
    return np.array([[int(x) for x in row] for row in values], dtype=np.int64)


def o8c_chain() -> Tuple[EvenReduction, AlgebraMorphism]:
    """ι: C_even(0,7) → C(0,6) → C(3,3) → C(1,1)^{⊗3} → M(8,R), as (φ_(0,1) reduction, rest)."""

    reduction = even_reduction(Signature(0, 7))
    phi03 = phi_K((0, 3), reduction.target)
    return reduction, phi03.compose(hyperbolic_tower(phi03.target))


def verify_o8c() -> O8CReport:
    """Spin(7,C) acting on SO(8,C)/SO(7,1): a(L) read off the images of a Cartan subalgebra under ι."""

    source = Signature(0, 7)
    reduction, iota = o8c_chain()
    identity = np.eye(8, dtype=np.int64)

    elements = [MultiVector.generator(source, "-", a) * MultiVector.generator(source, "-", b) for a, b in O8C_PAIRS]
    Y = [_integer_matrix(iota.apply(reduction.apply(x))) for x in elements]

    checks: Dict[str, bool] = {}
    checks["chain_relations"] = iota.check_relations()
    blade_rows = np.stack([_integer_matrix(iota.image(mask)).reshape(64) for mask in range(iota.source.dim)])
    checks["chain_bijective"] = certify_full_rank(blade_rows)
    checks["commuting"] = all(np.array_equal(Y[i] @ Y[j], Y[j] @ Y[i]) for i in range(3) for j in range(i + 1, 3))
    checks["complex_structures"] = all(np.array_equal(y @ y, -identity) and np.array_equal(y.T, -y) for y in Y)

    coords = tuple(torus_coordinates(y) for y in Y)
    checks["images_in_torus"] = all(c is not None for c in coords)
    signs = []
    for y, point in zip(Y, O8C_TORUS_POINTS):
        x = torus_matrix(point)
        signs.append(1 if np.array_equal(y, x) else -1 if np.array_equal(y, -x) else 0)
    checks["matches_chain_display"] = all(signs)

    rows = [list(c) for c in coords if c is not None]
    hyperplane = len(rows) == 3 and len(row_space_basis(rows, 4)) == 3
    checks["a_L_is_hyperplane"] = hyperplane
    normal: Tuple[Fraction, ...] = tuple(kernel_basis(rows, 4)[0]) if hyperplane else ()

    aH = coordinate_subspaces(4, 1, "D")
    aL = ConeSet.from_rows(4, [rows], "D") if hyperplane else ConeSet.zero(4, "D")
    checks["cones_disjoint"] = hyperplane and cones_properly_disjoint(aH, aL)
    checks["matches_hyperplane_orbit"] = hyperplane and cones_similar(aL, hyperplane_cone([1, 1, -1, -1], "D"))

    d = (group_stats("SO(8,C)").d, group_stats("SO(7,1)").d, group_stats("Spin(7,C)").d)
    checks["d_sum"] = d == (28, 7, 21) and d[0] == d[1] + d[2]

    report = O8CReport(checks, coords, tuple(signs), normal, aH, aL, d)
    level = logging.INFO if report.ok else logging.ERROR
    logger.log(level, "SO(8,C)/SO(7,1) verification: %s", "ok" if report.ok else checks)
    return report


# ---------------------------------------------------------------------------
# Space forms
# ---------------------------------------------------------------------------

_KAPPA = {"+": "+", "pos": "+", "positive": "+", "0": "0", "zero": "0", "-": "-", "neg": "-", "negative": "-"}

LORENTZ_NOTE = (
    "Compact Lorentz space forms are complete, so the homogeneous-model verdict is the verdict for "
    "every compact Lorentz manifold of this curvature."
)
# largest 2-power block whose slot identities are checked on every Exists verdict
WITNESS_BLOCK_LIMIT = 256


def _kappa(value: str) -> str:
    key = str(value).strip().lower()
    if key not in _KAPPA:
        raise ValueError(f"kappa must be one of +, 0, -; got '{value}'")
    return _KAPPA[key]


def _record(space: str, verdict: str, criterion: str, evidence: Optional[Dict[str, Any]] = None,
            provenance: Sequence[str] = (), kappa: Optional[str] = None, note: Optional[str] = None) -> DecisionRecord:
    record = DecisionRecord(
        space=space,
        verdict=verdict,
        criterion=criterion,
        evidence=evidence or {},
        provenance=list(provenance),
        kappa=kappa,
        note=note,
    )
    logger.debug("%s", record.summary())
    return record


def _positive_space_form_exists(p: int, q: int) -> Optional[str]:
    if q == 0:
        return "X(p,0) is a compact sphere"
    if p == 0:
        return "X(0,q) is hyperbolic space, which has uniform lattices"
    if p == 1 and q % 2 == 0:
        return "U(1,q/2) acts properly and cocompactly on X(1,q), q even"
    if p == 3 and q % 4 == 0:
        return "Sp(1,q/4) acts properly and cocompactly on X(3,q), q divisible by 4"
    if (p, q) == (7, 8):
        return "Spin(1,8) acts properly and cocompactly on X(7,8)"
    return None


def _positive_space_form(p: int, q: int) -> DecisionRecord:
    space = f"X({p},{q})"
    G, H = parse_group(f"O({p + 1},{q})"), parse_group(f"O({p},{q})")
    reason = _positive_space_form_exists(p, q)
    if reason is not None:
        criterion = CRITERION_COMPACT if q == 0 else (CRITERION_UNIFORM_LATTICE if p == 0 else CRITERION_TABLE)
        return _record(space, EXISTS, criterion, {"rule": reason}, [f"{CITED}:space-forms:{p},{q}"], "+")

    evidence: Dict[str, Any] = {"G": str(G), "H": str(H)}
    if calabi_markus(G, H):
        evidence["real_rank"] = group_stats(G).real_rank
        return _record(space, NOT_EXISTS, CRITERION_CALABI_MARKUS, evidence, [f"{DERIVED}:space-forms:{p},{q}"], "+")

    n = min(p + 1, q)
    root_type = "D" if p + 1 == q else "B"
    m = min(p, q)
    weyl = "D" if root_type == "D" else "BC"
    aH = ConeSet.from_rows(n, [_unit_rows(n, range(m))], weyl) if m else ConeSet.zero(n, weyl)
    try:
        if benoist_obstruction(root_type, n, aH):
            evidence.update({"root_type": root_type, "rank": n, "aH": aH.to_json()})
            return _record(space, NOT_EXISTS, CRITERION_BENOIST, evidence, [f"{DERIVED}:space-forms:{p},{q}"], "+")
    except WeylRankError as exc:
        evidence["benoist"] = f"skipped: {exc}"

    if rank_parity_obstruction(G, H):
        evidence.update({"rank_G": group_stats(G).rank, "rank_H": group_stats(H).rank})
        return _record(space, NOT_EXISTS, CRITERION_RANK_PARITY, evidence, [f"{DERIVED}:space-forms:{p},{q}"], "+")

    return _record(space, OPEN, CRITERION_NONE, evidence, note="No criterion decides this signature; non-existence is conjectured")


def space_form_status(p: int, q: int, kappa: str) -> DecisionRecord:
    """Compact quotients of the space form of signature (p,q) and curvature sign kappa."""

    if p < 0 or q < 0:
        raise ValueError(f"Signature entries must be non-negative, got ({p},{q})")
    sign = _kappa(kappa)
    if sign == "0":
        return _record(f"R^({p},{q})", EXISTS, CRITERION_LATTICE, {"lattice": f"Z^{p + q}"}, kappa="0")
    if sign == "+":
        return _positive_space_form(p, q)
    dual = _positive_space_form(q, p)
    return dual.model_copy(update={
        "space": f"X({p},{q})-",
        "kappa": "-",
        "note": f"Same manifold as X({q},{p}) with curvature +1" + (f"; {dual.note}" if dual.note else ""),
    })


def lorentz_space_form_status(n: int, kappa: str) -> DecisionRecord:
    if n < 2:
        raise ValueError(f"Lorentz space forms need dimension n >= 2, got {n}")
    record = space_form_status(n - 1, 1, kappa)
    note = LORENTZ_NOTE if not record.note else f"{record.note}; {LORENTZ_NOTE}"
    return record.model_copy(update={"note": note})


def tangential_space_form_status(p: int, q: int, with_witness: bool = False) -> DecisionRecord:
    """Tangential analogue O(p+1)⋉R^{p+1,q} / O(p)⋉R^{p,q}: exists iff p < ρ(q)."""

    if p < 0 or q < 0:
        raise ValueError(f"Signature entries must be non-negative, got ({p},{q})")
    bound = rho(q)
    space = f"X_tan({p},{q})"
    evidence: Dict[str, Any] = {"rho": "inf" if math.isinf(bound) else int(bound), "slots": p + 1}
    if p + 1 > bound:
        return _record(space, NOT_EXISTS, CRITERION_HURWITZ_RADON, evidence, [f"{DERIVED}:tangential:{p},{q}"])
    if q:
        construction = construction_data(q)
        evidence["construction"] = construction
        if with_witness:
            multiplication = bilinear_map(p + 1, q)
            evidence["witness"] = multiplication.as_dump()
            evidence["witness_verified"] = multiplication.verify()
        elif construction["model_size"] <= WITNESS_BLOCK_LIMIT:
            # identities on R^q = R^u ⊗ block reduce to the block
            evidence["witness_verified"] = bilinear_map(p + 1, construction["model_size"]).verify()
    if evidence.get("witness_verified") is False:
        logger.error("Bilinear witness for (%d,%d) failed its identities", p, q)
        return _record(space, OPEN, CRITERION_NONE, evidence, note="witness construction failed")
    return _record(space, EXISTS, CRITERION_HURWITZ_RADON, evidence, [f"{DERIVED}:tangential:{p},{q}"])


def tangential_table_rule(p: int, q: int) -> bool:
    """The tabulated existence pattern: q = 0, or q divisible by 1, 2, 4, 4, 8, 8, 8, 8 for p = 0..7."""

    if q == 0:
        return True
    modulus = {0: 1, 1: 2, 2: 4, 3: 4}.get(p, 8)
    return q % modulus == 0


# ---------------------------------------------------------------------------
# Grassmannians O(i+j,k+l)/O(i,k)×O(j,l)
# ---------------------------------------------------------------------------


def grassmannian_status(i: int, j: int, k: int, l: int) -> DecisionRecord:
    if min(i, j, k, l) < 0:
        raise ValueError(f"Grassmannian indices must be non-negative, got {(i, j, k, l)}")
    ni, nj, nk, nl = normalize_grassmannian(i, j, k, l)
    G, H = grassmannian_descriptors(i, j, k, l)
    space = f"{G}/{H}"
    g, h = group_stats(G), group_stats(H)
    evidence: Dict[str, Any] = {"normalized": [ni, nj, nk, nl], "d_G": g.d, "d_H": h.d}
    provenance = [f"{DERIVED}:grassmannian:{ni},{nj},{nk},{nl}"]
    if g.d == h.d:
        return _record(space, EXISTS, CRITERION_COMPACT, evidence, provenance)
    if h.d == 0:
        return _record(space, EXISTS, CRITERION_UNIFORM_LATTICE, evidence, provenance)
    found = grassmannian_obstructions(i, j, k, l)
    evidence["obstructions"] = found
    evidence["parity_rule"] = grassmannian_parity_obstruction(i, j, k, l)
    if found["calabi_markus"]:
        return _record(space, NOT_EXISTS, CRITERION_CALABI_MARKUS, evidence, provenance)
    if found["maximality_L1"] or found["maximality_L2"]:
        return _record(space, NOT_EXISTS, CRITERION_MAXIMALITY, evidence, provenance)
    if found["rank_parity"]:
        return _record(space, NOT_EXISTS, CRITERION_RANK_PARITY, evidence, provenance)
    return _record(space, OPEN, CRITERION_NONE, evidence, provenance)


# ---------------------------------------------------------------------------
# Decision pipeline
# ---------------------------------------------------------------------------


def _decide_obstructions(
    space: str,
    G: GroupDescriptor,
    H: GroupDescriptor,
    provenance: Sequence[str],
    inst: Optional[Instance] = None,
) -> DecisionRecord:
    g, h = group_stats(G), group_stats(H)
    evidence: Dict[str, Any] = {"d_G": g.d, "d_H": h.d}
    if g.d == h.d:
        return _record(space, EXISTS, CRITERION_COMPACT, evidence, provenance, note="G/H is compact")
    if h.d == 0:
        return _record(space, EXISTS, CRITERION_UNIFORM_LATTICE, evidence, provenance,
                       note="H is compact, so any uniform lattice of G acts cocompactly")
    if calabi_markus(G, H):
        evidence["real_rank"] = g.real_rank
        return _record(space, NOT_EXISTS, CRITERION_CALABI_MARKUS, evidence, provenance)

    h_cap_k = inst.h_cap_k if inst is not None else None
    try:
        if rank_parity_obstruction(G, H, h_cap_k):
            evidence.update({"rank_G": g.rank, "rank_H": h.rank, "rank_K": g.rank_of_K})
            return _record(space, NOT_EXISTS, CRITERION_RANK_PARITY, evidence, provenance)
    except UnsupportedGroupError as exc:
        evidence["rank_parity"] = f"unavailable: {exc}"

    if inst is None:
        return _record(space, OPEN, CRITERION_NONE, evidence, provenance)

    entry = inst.entry
    aH, aL = instance_cones(inst)
    open_note: Optional[str] = None
    if inst.L is not None and entry.table != TABLE_COMPACT_FORMS:
        d_L = group_stats(inst.L).d
        evidence.update({"L": str(inst.L), "d_L": d_L})
        if aH is not None and aL is not None:
            if maximality_obstruction(aH, h.d, aL, d_L):
                evidence["cone_check"] = "contained"
                return _record(space, NOT_EXISTS, CRITERION_MAXIMALITY, evidence, provenance)
            evidence["cone_check"] = "not contained"
        elif d_L > h.d:
            evidence["cone_check"] = "unavailable"
            evidence["maximality"] = f"{CITED}:{entry.id}:a(L) in a(H) not checked, no cone data"
            open_note = "maximality obstruction cited, a(L) ⊂ a(H) not verified"

    if entry.root_type and aH is not None:
        rank = evaluate_parameter(entry.root_rank or "0", {**inst.param_dict, **_derived_values(inst)})
        try:
            if benoist_obstruction(entry.root_type, rank, aH):
                evidence.update({"root_type": entry.root_type, "rank": rank, "aH": aH.to_json()})
                return _record(space, NOT_EXISTS, CRITERION_BENOIST, evidence, provenance)
        except (WeylRankError, UnsupportedGroupError) as exc:
            evidence["benoist"] = f"unavailable: {exc}"
    elif entry.root_type:
        evidence["benoist"] = "unavailable: no a(H) data"

    return _record(space, OPEN, CRITERION_NONE, evidence, provenance, note=open_note)


def decide_pair(G: str, H: str, params: Optional[Mapping[str, int]] = None) -> DecisionRecord:
    """Decision from group data alone, for spaces outside the catalog."""

    g, h = parse_group(G, params), parse_group(H, params)
    return _decide_obstructions(f"{g}/{h}", g, h, [f"{DERIVED}:descriptors"])


def decide(name: str, params: Optional[Mapping[str, int]] = None, catalog: Optional[Catalog] = None) -> DecisionRecord:
    """Exists / NotExists / Open for a named space, trying witnesses first and obstructions after."""

    catalog = catalog or load_catalog()
    try:
        entry = catalog.find(name)
    except CatalogError:
        if "/" not in name:
            raise
        G, H = name.split("/", 1)
        try:
            return decide_pair(G, H, params)
        except UnsupportedGroupError as exc:
            raise CatalogError(f"Unknown space '{name}': {exc}") from exc

    inst = instantiate(entry, params)
    provenance = entry.provenance_tags()

    if entry.spin_q is not None:
        report = check_spin_triple(entry.spin_q, catalog)
        if report.status == PASS:
            return _record(inst.name, EXISTS, CRITERION_SPIN_TRIPLE, report.as_dict(), provenance)
        logger.warning("Spin triple for %s did not verify: %s", inst.name, report.as_dict())
    elif entry.table == TABLE_COMPACT_FORMS and inst.L is not None:
        report = check_triple(TripleEntry.from_instance(inst))
        if report.status == PASS:
            return _record(inst.name, EXISTS, CRITERION_TRIPLE, report.as_dict(), provenance)
        cited = any(tag.startswith(f"{CITED}:") and tag.endswith(":L") for tag in provenance)
        if report.status == INCOMPLETE and report.d_sum_ok and cited:
            return _record(inst.name, EXISTS, CRITERION_TABLE, report.as_dict(), provenance,
                           note="cone data unavailable; d-sum verified, proper action cited")
        logger.warning("Triple for %s did not verify: %s", inst.name, report.status)

    record = _decide_obstructions(inst.name, inst.G, inst.H, provenance, inst)
    if entry.note:
        record = record.model_copy(update={"note": entry.note if not record.note else f"{record.note}; {entry.note}"})
    if "side-condition-needs-review" in entry.flags:
        logger.warning("%s carries a side condition flagged for review", entry.name)
    return record


# ---------------------------------------------------------------------------
# Batch verification
# ---------------------------------------------------------------------------

SECTIONS = (
    "clifford-table",
    "group-table",
    "spin-triples",
    "compact-forms",
    "maximality",
    "para-hermitian",
    "benoist",
    "rank-parity",
    "tangential",
    "vector-fields",
    "space-forms",
    "o8c",
    "grassmannian",
)

VECTOR_FIELD_SPOTS = ((1, 2), (3, 4), (7, 8), (8, 16), (1, 3))


@dataclass(frozen=True)
class _Run:
    catalog: Catalog
    seed: int
    fault_injection: FaultInjection


def _rows_from_table_check(section: str, check) -> List[ReportRow]:
    rows = [ReportRow(section, item, FAIL, "") for item in check.failed]
    if check.ok:
        rows.append(ReportRow(section, check.name, PASS, f"{len(check.passed)} entries"))
    return rows


def _section_clifford(run: _Run) -> List[ReportRow]:
    return _rows_from_table_check("clifford-table", verify_clifford_table())


def _section_group(run: _Run) -> List[ReportRow]:
    return _rows_from_table_check("group-table", verify_group_table())


def _section_spin(run: _Run) -> List[ReportRow]:
    rows = []
    for entry in run.catalog.table(TABLE_SPIN_TRIPLES):
        report = check_spin_triple(entry.spin_q, run.catalog, run.fault_injection)
        expected = evaluate_parameter(entry.d_G, {}) if entry.d_G else report.d_G
        status = report.status if report.d_G == expected else FAIL
        rows.append(ReportRow(
            "spin-triples", entry.id, status,
            f"{report.d_G} = {report.d_L} + {report.d_H}, det {report.detail['det']}",
        ))
    return rows


def _section_compact_forms(run: _Run) -> List[ReportRow]:
    rows = []
    for entry in run.catalog.table(TABLE_COMPACT_FORMS):
        for inst in iter_instances(entry):
            triple = TripleEntry.from_instance(inst, run.fault_injection)
            report = check_triple(triple)
            problems = []
            if not report.d_sum_ok:
                problems.append(f"d(L)+d(H) = {report.d_L}+{report.d_H} != {report.d_G}")
            if report.cones == "meet":
                problems.append("a(H) and a(L) meet")
            if entry.d_G is not None:
                quoted = evaluate_parameter(entry.d_G, inst.param_dict)
                if quoted != report.d_G:
                    problems.append(f"d(G) = {report.d_G}, table says {quoted}")
            real_rank = group_stats(inst.G).real_rank
            for label, cone in (("a(H)", triple.aH), ("a(L)", triple.aL)):
                if cone is not None and cone.weyl in ("BC", "D") and cone.ambient != real_rank:
                    problems.append(f"{label} lives in Q^{cone.ambient}, real rank is {real_rank}")
            if problems:
                status = FAIL
            else:
                status = report.status
            message = "; ".join(problems) or f"{report.d_G} = {report.d_L} + {report.d_H}, cones {report.cones}"
            if report.flags:
                logger.warning("%s flagged: %s", inst.label, ", ".join(report.flags))
            rows.append(ReportRow("compact-forms", inst.label, status, message))
    return rows


def _section_maximality(run: _Run) -> List[ReportRow]:
    rows = []
    for entry in run.catalog.table(TABLE_MAXIMALITY):
        for inst in iter_instances(entry):
            d_H = inst.d_of("H", run.fault_injection)
            d_L = inst.d_of("L", run.fault_injection)
            aH, aL = instance_cones(inst)
            if d_L <= d_H:
                rows.append(ReportRow("maximality", inst.label, FAIL, f"d(L) = {d_L} <= d(H) = {d_H}"))
            elif aH is None or aL is None:
                rows.append(ReportRow("maximality", inst.label, INCOMPLETE, f"d(L) = {d_L} > d(H) = {d_H}; no cone data"))
            elif maximality_obstruction(aH, d_H, aL, d_L):
                rows.append(ReportRow("maximality", inst.label, PASS, f"d(L) = {d_L} > d(H) = {d_H}, a(L) ⊂ a(H)"))
            else:
                rows.append(ReportRow("maximality", inst.label, FAIL, "a(L) is not contained in a(H)"))
    return rows


def _section_para_hermitian(run: _Run) -> List[ReportRow]:
    rows = []
    for entry in run.catalog.table(TABLE_PARA_HERMITIAN):
        for inst in iter_instances(entry):
            fires = calabi_markus(inst.G, inst.H)
            noncompact = inst.d_of("G", run.fault_injection) > inst.d_of("H", run.fault_injection)
            status = PASS if fires and noncompact else FAIL
            rows.append(ReportRow("para-hermitian", inst.label, status,
                                  f"real rank {group_stats(inst.G).real_rank}, calabi_markus {fires}"))
    return rows


def _section_benoist(run: _Run) -> List[ReportRow]:
    rows = []
    for entry in run.catalog.table(TABLE_BENOIST):
        for inst in iter_instances(entry):
            aH, _ = instance_cones(inst)
            if aH is None:
                rows.append(ReportRow("benoist", inst.label, INCOMPLETE, f"root type {entry.root_type}: no a(H) data"))
                continue
            rank = evaluate_parameter(entry.root_rank or "0", inst.param_dict)
            try:
                fires = benoist_obstruction(entry.root_type or "", rank, aH)
            except (WeylRankError, UnsupportedGroupError) as exc:
                rows.append(ReportRow("benoist", inst.label, INCOMPLETE, str(exc)))
                continue
            rows.append(ReportRow("benoist", inst.label, PASS if fires else FAIL,
                                  f"{entry.root_type}{rank}: b+ {'inside' if fires else 'outside'} W·a(H)"))
    return rows


def _section_rank_parity(run: _Run) -> List[ReportRow]:
    rows = []
    for entry in run.catalog.table(TABLE_RANK_PARITY):
        for inst in iter_instances(entry):
            fires = rank_parity_obstruction(inst.G, inst.H, inst.h_cap_k)
            expected = entry.expected == NOT_EXISTS
            rows.append(ReportRow("rank-parity", inst.label, PASS if fires == expected else FAIL,
                                  f"rank {group_stats(inst.G).rank}, obstruction {fires}"))
    return rows


def _construction_succeeds(p: int, q: int) -> bool:
    if q == 0:
        return True
    try:
        return bilinear_map(p + 1, q).verify()
    except HurwitzRadonError:
        return False


def _section_tangential(run: _Run) -> List[ReportRow]:
    rows = []
    for p in range(8):
        mismatches = []
        for q in range(65):
            expected = tangential_table_rule(p, q)
            verdict = tangential_space_form_status(p, q).verdict == EXISTS
            built = _construction_succeeds(p, q)
            if not (expected == verdict == built):
                mismatches.append(f"q={q}: table {expected}, decision {verdict}, construction {built}")
        rows.append(ReportRow("tangential", f"p={p}", FAIL if mismatches else PASS,
                              "; ".join(mismatches) or "q = 0..64 agree"))
    return rows


def _section_vector_fields(run: _Run) -> List[ReportRow]:
    rows = []
    for p, q in VECTOR_FIELD_SPOTS:
        chain = existence_chain(p, q, seed=run.seed)
        expected = p + 1 <= rho(q)
        ok = chain.consistent and chain.bilinear == expected
        rows.append(ReportRow("vector-fields", f"({p},{q})", PASS if ok else FAIL, chain.note))
    return rows


def _section_space_forms(run: _Run) -> List[ReportRow]:
    rows = []

    def add(item: str, failures: List[str]) -> None:
        rows.append(ReportRow("space-forms", item, FAIL if failures else PASS, "; ".join(failures)))

    add("(7,8,+) exists", [] if space_form_status(7, 8, "+").verdict == EXISTS else ["(7,8,+) not Exists"])
    failures = []
    for k in range(1, 9):
        if space_form_status(1, 2 * k, "+").verdict != EXISTS:
            failures.append(f"(1,{2 * k},+)")
        if space_form_status(1, 2 * k + 1, "+").verdict != NOT_EXISTS:
            failures.append(f"(1,{2 * k + 1},+)")
    add("X(1,q) parity", failures)
    failures = [
        f"({p},{q},+)"
        for p in range(1, 9)
        for q in range(1, p + 1)
        if space_form_status(p, q, "+").verdict != NOT_EXISTS
    ]
    add("p >= q > 0 excluded", failures)
    failures = [
        f"n={n}"
        for n in range(2, 18)
        if (lorentz_space_form_status(n, "-").verdict == EXISTS) != (n % 2 == 1)
    ]
    add("Lorentz anti-de Sitter parity", failures)
    add("(2,4,+) open", [] if space_form_status(2, 4, "+").verdict == OPEN else ["(2,4,+) decided"])
    failures = [
        f"({p},{q})"
        for p in range(9)
        for q in range(9)
        if space_form_status(p, q, "+").verdict != space_form_status(q, p, "-").verdict
    ]
    add("curvature duality", failures)
    return rows


def _section_o8c(run: _Run) -> List[ReportRow]:
    report = verify_o8c()
    failed = [name for name, ok in report.checks.items() if not ok]
    return [ReportRow("o8c", "SO(8,C)/SO(7,1)", FAIL if failed else PASS, ", ".join(failed) or "28 = 7 + 21")]


def _section_grassmannian(run: _Run) -> List[ReportRow]:
    mismatches = []
    for i in range(4):
        for j in range(4):
            for k in range(4):
                for l in range(4):
                    ni, nj, nk, nl = normalize_grassmannian(i, j, k, l)
                    found = grassmannian_obstructions(i, j, k, l)
                    if min(nj, nk, nl) > 0:
                        via_cones = found["calabi_markus"] or found["maximality_L1"] or found["maximality_L2"]
                        if via_cones != grassmannian_inequality_obstruction(i, j, k, l):
                            mismatches.append(f"{(i, j, k, l)}: inequality")
                    if grassmannian_parity_obstruction(i, j, k, l) and not found["rank_parity"]:
                        mismatches.append(f"{(i, j, k, l)}: parity")
    return [ReportRow("grassmannian", "indices <= 3", FAIL if mismatches else PASS,
                      "; ".join(mismatches) or "closed forms agree with the cone criteria")]


_SECTION_RUNNERS: Dict[str, Callable[[_Run], List[ReportRow]]] = {
    "clifford-table": _section_clifford,
    "group-table": _section_group,
    "spin-triples": _section_spin,
    "compact-forms": _section_compact_forms,
    "maximality": _section_maximality,
    "para-hermitian": _section_para_hermitian,
    "benoist": _section_benoist,
    "rank-parity": _section_rank_parity,
    "tangential": _section_tangential,
    "vector-fields": _section_vector_fields,
    "space-forms": _section_space_forms,
    "o8c": _section_o8c,
    "grassmannian": _section_grassmannian,
}


def _run_section(name: str, run: _Run) -> List[ReportRow]:
    try:
        rows = _SECTION_RUNNERS[name](run)
    except Exception as exc:
        logger.exception("Section %s crashed", name)
        return [ReportRow(name, name, FAIL, f"{type(exc).__name__}: {exc}")]
    failed = sum(1 for row in rows if row.status == FAIL)
    logger.info("%s: %d rows, %d failed", name, len(rows), failed)
    return rows


def verify_tables(
    seed: Optional[int] = None,
    sections: Optional[Sequence[str]] = None,
    fault_injection: FaultInjection = None,
    catalog: Optional[Catalog] = None,
    workers: int = 1,
) -> TableReport:
    """Re-run every table reproduction; failures and incomplete rows are listed, never dropped."""

    chosen = list(sections or SECTIONS)
    unknown = [name for name in chosen if name not in _SECTION_RUNNERS]
    if unknown:
        raise ValueError(f"Unknown sections {unknown}; choose from {list(SECTIONS)}")
    run = _Run(catalog or load_catalog(), get_config().seed if seed is None else seed, fault_injection)

    if workers <= 1:
        results = [_run_section(name, run) for name in chosen]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_section, name, run) for name in chosen]
            results = [f.result() for f in futures]

    report = TableReport(seed=run.seed)
    for rows in results:
        report.rows.extend(rows)
    counts = report.counts()
    logger.info("verify_tables: %d passed, %d failed, %d incomplete", counts[PASS], counts[FAIL], counts[INCOMPLETE])
    return report
