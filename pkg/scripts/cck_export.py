"""JSON export helpers for matrix models, decision records and table reports."""
from __future__ import annotations

import gzip
import json
from pathlib import Path
from typing import IO, Any, Iterable, Sequence

from clifford_morphisms import MatrixAlgebra
from exact_linalg import format_rational, to_fraction


def _open_text(output_path: str, mode: str = "wt") -> IO[str]:
    path = Path(output_path)
    open_fn = gzip.open if path.suffix == ".gz" else open
    return open_fn(path, mode, encoding="utf-8")


def rational_cell(value: Any) -> Any:
    """Integers stay JSON numbers; other rationals become ``"num/den"``."""

    frac = to_fraction(value)
    if frac.denominator == 1:
        return int(frac.numerator)
    return format_rational(frac)


def _write_matrix(matrix: Sequence[Sequence[Any]], handle: IO[str], indent: str) -> None:
    handle.write("[")
    for i, row in enumerate(matrix):
        handle.write("\n" if i == 0 else ",\n")
        handle.write(indent + json.dumps([rational_cell(x) for x in row], separators=(",", ":")))
    handle.write("\n" + indent[:-2] + "]")


def write_matrix_dump_filelike(
    n: int,
    ground: str,
    double: bool,
    generators: Iterable[Sequence[Sequence[Any]]],
    handle: IO[str],
) -> None:
    """Stream ``{"n","ground","double","generators"}`` one matrix row per line."""

    handle.write("{\n")
    handle.write(f'  "n": {int(n)},\n')
    handle.write(f'  "ground": {json.dumps(ground)},\n')
    handle.write(f'  "double": {json.dumps(bool(double))},\n')
    handle.write('  "generators": [')
    for index, matrix in enumerate(generators):
        handle.write("\n    " if index == 0 else ",\n    ")
        _write_matrix(matrix, handle, "      ")
    handle.write("\n  ]\n}\n")


def matrix_algebra_to_json(algebra: MatrixAlgebra, handle: IO[str]) -> None:
    write_matrix_dump_filelike(
        algebra.size,
        algebra.ground,
        algebra.double,
        (g.tolist() for g in algebra.generators),
        handle,
    )


def write_matrix_algebra(algebra: MatrixAlgebra, output_path: str) -> None:
    with _open_text(output_path) as handle:
        matrix_algebra_to_json(algebra, handle)


def write_json(payload: Any, output_path: str) -> None:
    with _open_text(output_path) as handle:
        json.dump(payload, handle, indent=2, ensure_ascii=False)
        handle.write("\n")


def read_json(input_path: str) -> Any:
    with _open_text(input_path, "rt") as handle:
        return json.load(handle)
