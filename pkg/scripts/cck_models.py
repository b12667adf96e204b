"""Validated JSON surfaces: the catalog data file and decision records."""
from __future__ import annotations

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from cck_schema import CITED, DERIVED, EXISTS, NOT_EXISTS, OPEN

CATALOG_VERSION = 1

ConeKind = Literal[
    "orthogonal",
    "block",
    "coordinate",
    "constant_line",
    "line",
    "split_pairs",
    "antidiagonal",
    "full",
    "hyperplane_orbit",
    "leading",
    "literal",
]


def _normalize_verdict(value: Any) -> Any:
    if isinstance(value, str):
        key = value.strip().lower().replace("-", "_").replace(" ", "_")
        return {"notexists": NOT_EXISTS, "not_exists": NOT_EXISTS, "exists": EXISTS, "open": OPEN}.get(key, key)
    return value


class ConeRecipe(BaseModel):
    """Parametrized description of a cone; sizes are expressions in the entry parameters."""

    kind: ConeKind
    weyl: str = "BC"
    ambient: Optional[str] = None
    dim: Optional[str] = None
    r: Optional[str] = None
    s: Optional[str] = None
    p: Optional[str] = None
    q: Optional[str] = None
    blocks: Optional[List[List[str]]] = None
    vector: Optional[List[str]] = None
    normal: Optional[List[str]] = None
    value: Optional[str] = None
    pairs: Optional[str] = None
    components: Optional[List[List[List[str]]]] = None

    @field_validator("ambient", "dim", "r", "s", "p", "q", "value", "pairs", mode="before")
    @classmethod
    def stringify(cls, v: Any) -> Optional[str]:
        if v is None:
            return None
        return str(v)

    @field_validator("vector", "normal", mode="before")
    @classmethod
    def stringify_list(cls, v: Any) -> Optional[List[str]]:
        if v is None:
            return None
        return [str(x) for x in v]


class SymmetricSpaceEntry(BaseModel):
    id: str
    table: str
    row: int = Field(..., ge=1)
    name: str
    G: str
    H: str
    params: Dict[str, int] = Field(default_factory=dict, description="parameter -> minimal value")
    derived: Dict[str, str] = Field(default_factory=dict, description="parameter -> expression")
    conditions: List[str] = Field(default_factory=list)
    samples: List[Dict[str, int]] = Field(default_factory=list)
    h_cap_k: Optional[str] = None
    aH: Optional[ConeRecipe] = None
    L: Optional[str] = None
    aL: Optional[ConeRecipe] = None
    root_type: Optional[str] = None
    root_rank: Optional[str] = None
    d_G: Optional[str] = Field(None, description="d(G) as quoted, checked against the computed value")
    spin_q: Optional[int] = Field(None, ge=1, le=8)
    expected: Literal["exists", "not_exists", "open"]
    provenance: Dict[str, str] = Field(default_factory=dict)
    flags: List[str] = Field(default_factory=list)
    aliases: List[str] = Field(default_factory=list)
    note: Optional[str] = None

    @field_validator("expected", mode="before")
    @classmethod
    def parse_expected(cls, v: Any) -> Any:
        return _normalize_verdict(v)

    @field_validator("flags", "aliases", "conditions", mode="before")
    @classmethod
    def listify(cls, v: Any) -> List[str]:
        if v is None or v == "":
            return []
        if isinstance(v, str):
            return [v]
        return list(v)

    @field_validator("provenance", mode="before")
    @classmethod
    def check_provenance(cls, v: Any) -> Dict[str, str]:
        out = dict(v or {})
        for key, tag in out.items():
            if tag not in (CITED, DERIVED):
                raise ValueError(f"provenance for '{key}' must be '{CITED}' or '{DERIVED}', got '{tag}'")
        return out

    def provenance_tags(self) -> List[str]:
        return [f"{tag}:{self.table}#{self.row}:{key}" for key, tag in sorted(self.provenance.items())]


class CatalogFile(BaseModel):
    version: int = CATALOG_VERSION
    entries: List[SymmetricSpaceEntry]

    @model_validator(mode="after")
    def unique_ids(self) -> "CatalogFile":
        seen = set()
        for entry in self.entries:
            if entry.id in seen:
                raise ValueError(f"Duplicate catalog id '{entry.id}'")
            seen.add(entry.id)
        if self.version != CATALOG_VERSION:
            raise ValueError(f"Unsupported catalog version {self.version}, expected {CATALOG_VERSION}")
        return self


class DecisionRecord(BaseModel):
    space: str
    verdict: Literal["exists", "not_exists", "open"]
    criterion: str
    evidence: Dict[str, Any] = Field(default_factory=dict)
    provenance: List[str] = Field(default_factory=list)
    kappa: Optional[str] = None
    note: Optional[str] = None

    @field_validator("verdict", mode="before")
    @classmethod
    def parse_verdict(cls, v: Any) -> Any:
        return _normalize_verdict(v)

    @field_validator("kappa", mode="before")
    @classmethod
    def parse_kappa(cls, v: Any) -> Optional[str]:
        if v is None:
            return None
        text = str(v).strip()
        mapping = {"+": "+", "pos": "+", "positive": "+", "0": "0", "zero": "0", "-": "-", "neg": "-", "negative": "-"}
        if text not in mapping:
            raise ValueError(f"kappa must be one of +, 0, -; got '{v}'")
        return mapping[text]

    def to_json(self) -> Dict[str, Any]:
        return self.model_dump(exclude_none=True)

    def summary(self) -> str:
        label = {EXISTS: "Exists", NOT_EXISTS: "NotExists", OPEN: "Open"}[self.verdict]
        return f"{self.space}: {label} ({self.criterion})"
