"""Command-line front end.

Exit codes: 0 compliant / satisfiable / success, 1 violated / unsatisfiable,
2 usage or input error, 3 solver aborted at its decision limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import reports
from .bridge import abstract, lift
from .core import Severity, aggregate, validate_sla
from .dsl import export_dimacs, parse_dimacs, parse_sla, parse_trace, serialize_sla
from .errors import SlaError
from .solver import Aborted, Sat, SolverConfig, cnf_to_formula, solve_slas, to_cnf
from .verifier import bind, verify_at, verify_window

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_ABORTED = 3


class CliError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load_sla(path: str):
    try:
        return parse_sla(_read(path))
    except SlaError as exc:
        raise CliError(f"{path}:{exc}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror or exc}") from None


def _window(spec: str) -> tuple[int, int]:
    lo, sep, hi = spec.partition(":")
    try:
        if not sep:
            raise ValueError
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like <t0>:<t1>, got {spec!r}") from None


def _emit(structured: bool, payload: dict, text: str) -> None:
    print(json.dumps(payload, indent=2) if structured else text)


def cmd_validate(args: argparse.Namespace) -> int:
    for path in args.sla_files:
        sla = _load_sla(path)
        issues = validate_sla(sla)
        print(f"{path}: ok ({len(sla.clauses)} clauses)" if not issues else f"{path}:")
        for issue in issues:
            print(f"  {issue.severity.value}: {issue.code}: {issue.message}")
        if any(i.severity is Severity.ERROR for i in issues):
            return EXIT_INPUT
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    sla = _load_sla(args.sla_file)
    try:
        trace = parse_trace(_read(args.trace))
    except SlaError as exc:
        raise CliError(f"{args.trace}:{exc}") from None
    structured = args.format == "structured"
    if args.at is not None:
        if args.step is not None:
            raise CliError("--step only applies to --window")
        report = verify_at(sla, bind(trace, args.at))
        _emit(structured, reports.compliance_to_dict(report), reports.compliance_to_text(report))
        return EXIT_OK if report.overall else EXIT_FAILED
    t0, t1 = args.window if args.window is not None else trace.extent()
    window = verify_window(sla, trace, t0, t1, args.step or 1)
    _emit(structured, reports.window_to_dict(window), reports.window_to_text(window))
    return EXIT_OK if window.compliant else EXIT_FAILED


def cmd_solve(args: argparse.Namespace) -> int:
    slas = [_load_sla(p) for p in args.sla_files]
    report = solve_slas(slas, SolverConfig(decision_limit=args.decision_limit))
    _emit(args.format == "structured", reports.solve_to_dict(report), reports.solve_to_text(report))
    if isinstance(report.result, Sat):
        return EXIT_OK
    if isinstance(report.result, Aborted):
        return EXIT_ABORTED
    return EXIT_FAILED


def cmd_aggregate(args: argparse.Namespace) -> int:
    combined = aggregate([_load_sla(p) for p in args.sla_files], args.name)
    _write(args.output, serialize_sla(combined))
    print(f"wrote {args.output} ({len(combined.clauses)} clauses)")
    return EXIT_OK


def cmd_to_sat(args: argparse.Namespace) -> int:
    formula, var_map = abstract(_load_sla(args.sla_file))
    cnf = to_cnf(formula, var_map)
    _write(args.output, export_dimacs(cnf))
    print(f"wrote {args.output} ({cnf.num_vars} vars, {len(cnf.clauses)} clauses)")
    return EXIT_OK


def cmd_from_sat(args: argparse.Namespace) -> int:
    try:
        cnf = parse_dimacs(_read(args.cnf_file))
    except SlaError as exc:
        raise CliError(f"{args.cnf_file}:{exc}") from None
    sla, _ = lift(cnf_to_formula(cnf), name=Path(args.cnf_file).stem)
    _write(args.output, serialize_sla(sla))
    print(f"wrote {args.output} ({len(sla.clauses)} symbolic clauses)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slasat", description="Machine-decidable service level agreements.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check SLA documents for well-formedness")
    p.add_argument("sla_files", nargs="+")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("verify", help="check an SLA against a metric trace")
    p.add_argument("sla_file")
    p.add_argument("--trace", required=True)
    when = p.add_mutually_exclusive_group()
    when.add_argument("--at", type=int)
    when.add_argument("--window", type=_window)
    p.add_argument("--step", type=int)
    p.add_argument("--format", choices=["text", "structured"], default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="search for clause outcomes satisfying all SLAs")
    p.add_argument("sla_files", nargs="+")
    p.add_argument("--decision-limit", type=int, default=SolverConfig().decision_limit)
    p.add_argument("--format", choices=["text", "structured"], default="text")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("aggregate", help="conjoin SLAs into one document")
    p.add_argument("sla_files", nargs="+")
    p.add_argument("--name", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("to-sat", help="export an SLA's abstraction as DIMACS CNF")
    p.add_argument("sla_file")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_to_sat)

    p = sub.add_parser("from-sat", help="lift a DIMACS CNF into a symbolic SLA")
    p.add_argument("cnf_file")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_from_sat)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        return args.func(args)
    except (CliError, SlaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
