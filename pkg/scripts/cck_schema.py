"""Canonical constants and report rows shared by the catalog, exports and CLI."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

# Verdicts
EXISTS = "exists"
NOT_EXISTS = "not_exists"
OPEN = "open"
VERDICTS = (EXISTS, NOT_EXISTS, OPEN)

# Check statuses
PASS = "pass"
FAIL = "fail"
INCOMPLETE = "incomplete"

# Provenance tags: "cited" rows are quoted from the literature tables, "derived" rows are computed here
CITED = "cited"
DERIVED = "derived"

# Criterion identifiers
CRITERION_TRIPLE = "check_triple"
CRITERION_SPIN_TRIPLE = "check_spin_triple"
CRITERION_COMPACT = "compact_quotient"
CRITERION_UNIFORM_LATTICE = "uniform_lattice"
CRITERION_CALABI_MARKUS = "calabi_markus"
CRITERION_RANK_PARITY = "rank_parity_obstruction"
CRITERION_MAXIMALITY = "maximality_obstruction"
CRITERION_BENOIST = "benoist_obstruction"
CRITERION_HURWITZ_RADON = "hurwitz_radon_bound"
CRITERION_LATTICE = "flat_lattice"
CRITERION_TABLE = "table_citation"
CRITERION_NONE = "none"

# Catalog tables
TABLE_COMPACT_FORMS = "compact-forms"
TABLE_SPIN_TRIPLES = "spin-triples"
TABLE_PARA_HERMITIAN = "para-hermitian"
TABLE_BENOIST = "benoist"
TABLE_MAXIMALITY = "maximality"
TABLE_RANK_PARITY = "rank-parity"

# CLI exit codes
EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INCOMPLETE = 3


@dataclass
class TripleReport:
    """Outcome of the d-sum and cone-disjointness checks for one (G, H, L)."""

    space: str
    L: str
    d_G: int
    d_H: int
    d_L: int
    cones: str  # "disjoint", "meet", "unavailable", "certificate" or "certificate_failed"
    provenance: List[str] = field(default_factory=list)
    flags: List[str] = field(default_factory=list)
    detail: Dict[str, Any] = field(default_factory=dict)

    @property
    def d_sum_ok(self) -> bool:
        return self.d_L + self.d_H == self.d_G

    @property
    def status(self) -> str:
        if not self.d_sum_ok or self.cones in ("meet", "certificate_failed"):
            return FAIL
        if self.cones == "unavailable":
            return INCOMPLETE
        return PASS

    def as_dict(self) -> Dict[str, Any]:
        return {
            "space": self.space,
            "L": self.L,
            "d": {"G": self.d_G, "H": self.d_H, "L": self.d_L},
            "d_sum_ok": self.d_sum_ok,
            "cones": self.cones,
            "status": self.status,
            "provenance": list(self.provenance),
            "flags": list(self.flags),
            **({"detail": self.detail} if self.detail else {}),
        }


@dataclass
class ReportRow:
    section: str
    item: str
    status: str
    message: str = ""

    def as_dict(self) -> Dict[str, str]:
        return {"section": self.section, "item": self.item, "status": self.status, "message": self.message}


@dataclass
class TableReport:
    """Batch verification summary; failures and incomplete rows are listed, never dropped."""

    rows: List[ReportRow] = field(default_factory=list)
    seed: Optional[int] = None

    def add(self, section: str, item: str, status: str, message: str = "") -> None:
        self.rows.append(ReportRow(section, item, status, message))

    def _with(self, status: str) -> List[ReportRow]:
        return [row for row in self.rows if row.status == status]

    @property
    def passed(self) -> List[ReportRow]:
        return self._with(PASS)

    @property
    def failed(self) -> List[ReportRow]:
        return self._with(FAIL)

    @property
    def incomplete(self) -> List[ReportRow]:
        return self._with(INCOMPLETE)

    @property
    def ok(self) -> bool:
        return not self.failed

    def counts(self) -> Dict[str, int]:
        return {PASS: len(self.passed), FAIL: len(self.failed), INCOMPLETE: len(self.incomplete)}

    def section_counts(self) -> Dict[str, Dict[str, int]]:
        out: Dict[str, Dict[str, int]] = {}
        for row in self.rows:
            bucket = out.setdefault(row.section, {PASS: 0, FAIL: 0, INCOMPLETE: 0})
            bucket[row.status] += 1
        return out

    def as_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "counts": self.counts(),
            "sections": self.section_counts(),
            "failed": [row.as_dict() for row in self.failed],
            "incomplete": [row.as_dict() for row in self.incomplete],
            "passed": [row.as_dict() for row in self.passed],
        }
