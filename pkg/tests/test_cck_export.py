from __future__ import annotations

import gzip
import json
from fractions import Fraction
from io import StringIO
from pathlib import Path

from cck_export import (
    matrix_algebra_to_json,
    rational_cell,
    read_json,
    write_json,
    write_matrix_algebra,
    write_matrix_dump_filelike,
)
from clifford_core import Signature
from clifford_morphisms import build_real_rep


def test_rational_cell():
    assert rational_cell(4) == 4
    assert rational_cell(Fraction(6, 3)) == 2
    assert rational_cell(Fraction(-3, 2)) == "-3/2"


def test_write_matrix_algebra_plain(tmp_path: Path):
    output = tmp_path / "rep.json"
    algebra = build_real_rep(Signature(1, 1))

    write_matrix_algebra(algebra, str(output))

    payload = json.loads(output.read_text(encoding="utf-8"))
    assert payload["n"] == 2
    assert payload["double"] is False
    assert payload["generators"] == [g.tolist() for g in algebra.generators]


def test_write_json_gzip(tmp_path: Path):
    output = tmp_path / "report.json.gz"

    write_json({"verdict": "open", "space": "X(2,4)"}, str(output))

    with gzip.open(output, "rt", encoding="utf-8") as handle:
        assert json.load(handle) == {"verdict": "open", "space": "X(2,4)"}
    assert read_json(str(output))["space"] == "X(2,4)"


def test_matrix_dump_filelike():
    buffer = StringIO()

    write_matrix_dump_filelike(1, "C", True, [[[Fraction(1, 2)]], [[-1]]], buffer)

    buffer.seek(0)
    payload = json.load(buffer)
    assert payload == {"n": 1, "ground": "C", "double": True, "generators": [[["1/2"]], [[-1]]]}


def test_matrix_algebra_to_json_has_one_row_per_line():
    buffer = StringIO()

    matrix_algebra_to_json(build_real_rep(Signature(0, 2)), buffer)

    lines = buffer.getvalue().splitlines()
    assert sum(1 for line in lines if line.strip().startswith("[") and line.strip().rstrip(",").endswith("]")) >= 8
