"""CLI entrypoint for Clifford algebra classification, compact-form decisions and table verification."""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from typing import Any, Callable, Dict, List, Optional, Tuple

from dotenv import load_dotenv

from catalog import (
    CatalogError,
    TripleEntry,
    check_spin_triple,
    check_triple,
    decide,
    instantiate,
    load_catalog,
    space_form_status,
    tangential_space_form_status,
    verify_tables,
)
from cck_config import ToolkitConfig, set_config
from cck_export import matrix_algebra_to_json, write_json, write_matrix_algebra
from cck_models import DecisionRecord
from cck_schema import EXIT_FAIL, EXIT_INCOMPLETE, EXIT_OK, EXIT_USAGE, FAIL, INCOMPLETE, NOT_EXISTS
from clifford_core import Signature
from clifford_morphisms import build_real_rep, classify_clifford, classify_group
from hurwitz_radon import (
    build_orthogonal_multiplication,
    format_vector,
    hurwitz_decomposition,
    rational_sphere_point,
    rho,
    sum_of_squares_identity,
    vector_fields_on_sphere,
)
from lie_descriptors import MotionElement, group_stats, jordan_decompose_motion

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


def _parse_param(value: str) -> Tuple[str, int]:
    name, sep, number = value.partition("=")
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"Invalid parameter '{value}'. Expected NAME=INTEGER, e.g. n=3.")
    try:
        return name.strip(), int(number)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"Invalid parameter '{value}'. '{number}' is not an integer.") from exc


def _parse_fault(value: str) -> Tuple[str, str]:
    template, sep, expr = value.partition("=")
    if not sep or not template or not expr:
        raise argparse.ArgumentTypeError(f"Invalid fault '{value}'. Expected GROUP=EXPR, e.g. Sp(1,n)=4n-1.")
    return template, expr


def _parse_json_arg(value: str) -> Any:
    try:
        return json.loads(value)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"Invalid JSON '{value}': {exc.msg}") from exc


def _build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cck",
        description="Clifford algebras C(p,q) and compact Clifford-Klein forms",
    )
    parser.add_argument("--json", action="store_true", help="Emit JSON instead of text")
    parser.add_argument("--seed", type=int, help="Random seed for sampled checks (default: CCK_SEED)")
    parser.add_argument("--max-size", type=int, help="Cap on p+q for real matrix models (default: CCK_MAX_REP_SIZE)")
    parser.add_argument("--catalog", help="Path to an alternative catalog JSON file")
    parser.add_argument("--log-level", help="Logging level (default: CCK_LOG_LEVEL or INFO)")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("clifford", help="Classify C(p,q) as a matrix algebra")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)

    p = sub.add_parser("group", help="Name the group G(p,q) and its dimensions")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)

    p = sub.add_parser("rep", help="Integer real matrix model of C(p,q)")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("-o", "--output", help="Write the generator matrices to JSON (.gz compresses)")

    p = sub.add_parser("hr", help="Hurwitz-Radon number and orthogonal multiplication on R^q")
    p.add_argument("q", type=int)

    p = sub.add_parser("fields", help="p independent vector fields on S^(q-1)")
    p.add_argument("q", type=int)
    p.add_argument("p", type=int)
    p.add_argument("--points", type=int, default=5, help="Number of exact sphere points to test")

    p = sub.add_parser("sos", help="Sum-of-squares identity for (p+1) x q")
    p.add_argument("p1", type=int)
    p.add_argument("q", type=int)

    p = sub.add_parser("spaceform", help="Compact forms of the space form of signature (p,q)")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("kappa", choices=["+", "0", "-"])

    p = sub.add_parser("tangential", help="Compact forms of the tangential space form (p,q)")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--witness", action="store_true", help="Attach the bilinear-map witness")

    for verb, text in (("decide", "Decide a named space"), ("check-triple", "Check a (G,H,L) triple")):
        p = sub.add_parser(verb, help=text)
        p.add_argument("name")
        p.add_argument("--param", type=_parse_param, action="append", default=[], help="NAME=INTEGER, repeatable")

    p = sub.add_parser("verify-tables", help="Re-run every table reproduction")
    p.add_argument("-o", "--output", help="Write the report to JSON (.gz compresses)")
    p.add_argument("--section", action="append", dest="sections", help="Restrict to a section, repeatable")
    p.add_argument("--workers", type=int, default=1, help="Worker threads across sections")
    p.add_argument("--fault", type=_parse_fault, action="append", default=[], help="GROUP=EXPR replaces d(GROUP)")

    p = sub.add_parser("jordan", help="Jordan decomposition of a Cartan motion group element")
    p.add_argument("--k", type=_parse_json_arg, required=True, help="Orthogonal matrix as JSON")
    p.add_argument("--v", type=_parse_json_arg, required=True, help="Translation vector as JSON")
    return parser


def _emit(args: argparse.Namespace, payload: Any, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def _decision_exit(record: DecisionRecord) -> int:
    return EXIT_FAIL if record.verdict == NOT_EXISTS else EXIT_OK


def _print_decision(args: argparse.Namespace, record: DecisionRecord) -> int:
    text = record.summary()
    if record.note:
        text += f"\n  {record.note}"
    _emit(args, record.to_json(), text)
    return _decision_exit(record)


def _cmd_clifford(args: argparse.Namespace) -> int:
    cls = classify_clifford(Signature(args.p, args.q))
    payload = {
        "p": args.p,
        "q": args.q,
        "label": cls.label,
        "matrix": cls.matrix_label,
        "ground": cls.ground,
        "n": cls.n,
        "double": cls.double,
    }
    _emit(args, payload, cls.matrix_label)
    return EXIT_OK


def _cmd_group(args: argparse.Namespace) -> int:
    group = classify_group(Signature(args.p, args.q))
    stats = group_stats(group.descriptor())
    payload = {"p": args.p, "q": args.q, "group": group.label, **stats.as_dict()}
    _emit(args, payload, f"G({args.p},{args.q}) = {group.label} (dim {stats.dim}, d {stats.d})")
    return EXIT_OK


def _cmd_rep(args: argparse.Namespace) -> int:
    algebra = build_real_rep(Signature(args.p, args.q), max_size=args.max_size)
    relations = algebra.check_relations()
    if args.output:
        write_matrix_algebra(algebra, args.output)
        print(f"Wrote {len(algebra.generators)} generators of size {algebra.size} to {args.output}")
    elif args.json:
        matrix_algebra_to_json(algebra, sys.stdout)
    else:
        kind = classify_clifford(algebra.sig).matrix_label
        print(f"C{algebra.sig} = {kind}: {len(algebra.generators)} generators of size {algebra.size}, "
              f"relations {'ok' if relations else 'FAILED'}")
    return EXIT_OK if relations else EXIT_FAIL


def _cmd_hr(args: argparse.Namespace) -> int:
    decomp = hurwitz_decomposition(args.q)
    multiplication = build_orthogonal_multiplication(args.q)
    payload = {
        "q": args.q,
        "rho": decomp.rho,
        "u": decomp.u,
        "alpha": decomp.alpha,
        "beta": decomp.beta,
        "matrices": multiplication.as_dump()["matrices"],
    }
    text = (f"rho({args.q}) = {decomp.rho} (q = {decomp.u}·2^(4·{decomp.alpha}+{decomp.beta})); "
            f"{multiplication.p} orthogonal {args.q}x{args.q} matrices")
    _emit(args, payload, text)
    return EXIT_OK


def _cmd_fields(args: argparse.Namespace) -> int:
    fields = vector_fields_on_sphere(args.q, args.p)
    rng = random.Random(args.seed)
    points: List[Dict[str, Any]] = []
    for _ in range(args.points):
        w = rational_sphere_point(args.q, rng)
        points.append({"w": format_vector(w), "independent": fields.independent_at(w)})
    ok = all(point["independent"] for point in points)
    payload = {"q": args.q, "p": args.p, "points": points, "independent": ok}
    text = f"{args.p} vector fields on S^{args.q - 1}: {'independent' if ok else 'DEPENDENT'} at {len(points)} points"
    _emit(args, payload, text)
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_sos(args: argparse.Namespace) -> int:
    certificate = sum_of_squares_identity(args.p1, args.q)
    payload = {"p1": args.p1, "q": args.q, "identity": certificate.render(), "verified": certificate.verify()}
    _emit(args, payload, certificate.render())
    return EXIT_OK


def _cmd_spaceform(args: argparse.Namespace) -> int:
    return _print_decision(args, space_form_status(args.p, args.q, args.kappa))


def _cmd_tangential(args: argparse.Namespace) -> int:
    record = tangential_space_form_status(args.p, args.q, with_witness=args.witness)
    bound = rho(args.q)
    text = record.summary() + f"\n  p = {args.p}, rho({args.q}) = {bound}"
    _emit(args, record.to_json(), text)
    return _decision_exit(record)


def _cmd_decide(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    return _print_decision(args, decide(args.name, dict(args.param), catalog))


def _cmd_check_triple(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    entry = catalog.find(args.name)
    if entry.spin_q is not None:
        report = check_spin_triple(entry.spin_q, catalog)
    else:
        report = check_triple(TripleEntry.from_instance(instantiate(entry, dict(args.param))))
    text = (f"{report.space} with L = {report.L}: {report.status}\n"
            f"  d: {report.d_G} {'=' if report.d_sum_ok else '!='} {report.d_L} + {report.d_H}; cones {report.cones}")
    _emit(args, report.as_dict(), text)
    return {FAIL: EXIT_FAIL, INCOMPLETE: EXIT_INCOMPLETE}.get(report.status, EXIT_OK)


def _cmd_verify_tables(args: argparse.Namespace) -> int:
    report = verify_tables(
        seed=args.seed,
        sections=args.sections,
        fault_injection=dict(args.fault) or None,
        catalog=load_catalog(args.catalog),
        workers=args.workers,
    )
    if args.output:
        write_json(report.as_dict(), args.output)
    if args.json:
        print(json.dumps(report.as_dict(), indent=2, ensure_ascii=False))
    else:
        counts = report.counts()
        print("=== verify-tables ===")
        for section, bucket in report.section_counts().items():
            print(f"{section}: {bucket['pass']} passed, {bucket['fail']} failed, {bucket['incomplete']} incomplete")
        for label, rows in (("Failed", report.failed), ("Incomplete", report.incomplete)):
            if rows:
                print(f"{label}:")
                for row in rows:
                    print(f"- [{row.section}] {row.item}: {row.message}")
        print(f"Total: {counts['pass']} passed, {counts['fail']} failed, {counts['incomplete']} incomplete "
              f"(seed {report.seed})")
    return EXIT_OK if report.ok else EXIT_FAIL


def _cmd_jordan(args: argparse.Namespace) -> int:
    g = MotionElement(args.k, args.v)
    s, w = jordan_decompose_motion(g)
    commute = s * w == w * s
    recomposed = s * w == g
    payload = {"g": g.to_json(), "s": s.to_json(), "w": w.to_json(), "commute": commute, "recomposes": recomposed}
    text = f"s = {s!r}\nw = {w!r}\ncommute: {commute}, s·w = g: {recomposed}"
    _emit(args, payload, text)
    return EXIT_OK if commute and recomposed else EXIT_FAIL


_COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "clifford": _cmd_clifford,
    "group": _cmd_group,
    "rep": _cmd_rep,
    "hr": _cmd_hr,
    "fields": _cmd_fields,
    "sos": _cmd_sos,
    "spaceform": _cmd_spaceform,
    "tangential": _cmd_tangential,
    "decide": _cmd_decide,
    "check-triple": _cmd_check_triple,
    "verify-tables": _cmd_verify_tables,
    "jordan": _cmd_jordan,
}


def _configure(args: argparse.Namespace) -> ToolkitConfig:
    config = ToolkitConfig.from_env().with_overrides(
        seed=args.seed,
        max_rep_size=args.max_size,
        catalog_path=args.catalog,
        log_level=args.log_level.upper() if args.log_level else None,
    )
    set_config(config)
    logging.basicConfig(level=config.log_level, format=LOG_FORMAT)
    args.seed = config.seed
    args.max_size = config.max_rep_size
    args.catalog = config.catalog_path
    return config


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    parser = _build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        _configure(args)
        return _COMMANDS[args.verb](args)
    except CatalogError as exc:
        print(f"Not found: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, NotImplementedError, MemoryError) as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
