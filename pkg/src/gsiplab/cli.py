"""Command-line front end.

Subcommands:
  list    -- show builtin problems
  run     -- run a lower-bounding variant, export the trace as CSV or JSON
  verify  -- cross-check branch-and-bound subproblem values against the grid oracle
  fmt     -- canonicalize a .gsip file

Exit codes: 0 success, 2 usage error, 3 solver error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional

from . import algorithms, gsip
from .expr import EvaluationError, evaluate
from .globalopt import NodeBudgetExceeded, grid_minimize, minimize
from .problem_format import (ProblemSyntaxError, ProblemValidationError,
                             parse_problem, serialize_problem)


class UsageError(Exception):
    pass


def _fmt_real(v: Optional[float]) -> str:
    return "" if v is None else repr(float(v))


def _fmt_point(pt: Optional[dict]) -> str:
    if pt is None:
        return ""
    return ";".join(repr(float(pt[n])) for n in sorted(pt))


def _load_problem(args) -> gsip.GsipProblem:
    if args.problem is not None:
        try:
            return gsip.get_builtin(args.problem)
        except KeyError as e:
            raise UsageError(str(e)) from None
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {args.file}: {e}") from None
    try:
        return gsip.from_document(parse_problem(text))
    except (ProblemSyntaxError, ProblemValidationError, ValueError) as e:
        raise UsageError(f"{args.file}: {e}") from None


_VARIANT_ALIASES = {
    "llp-only": algorithms.LLP_ONLY,
    "aux": algorithms.AUX_LLP,
    "aux-llp": algorithms.AUX_LLP,
    "sip-llp": algorithms.SIP_LLP,
}


def _config_from_args(args) -> algorithms.AlgorithmConfig:
    initial = []
    for spec in args.initial_y or []:
        try:
            initial.append([float(v) for v in spec.split(",")])
        except ValueError:
            raise UsageError(f"bad initial Y point {spec!r}") from None
    try:
        return algorithms.AlgorithmConfig(
            variant=_VARIANT_ALIASES[args.variant],
            alpha=args.alpha,
            tol_feas=args.tol_feas,
            tol_opt=args.tol_opt,
            max_iter=args.max_iter,
            initial_yset=tuple(initial),  # names filled in below
            aux_tie_break=args.tie_break,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None


def _resolve_initial(cfg: algorithms.AlgorithmConfig,
                     p: gsip.GsipProblem) -> algorithms.AlgorithmConfig:
    yset = []
    for values in cfg.initial_yset:
        if len(values) != p.Y.dim:
            raise UsageError(
                f"initial Y point has {len(values)} components, expected {p.Y.dim}")
        yset.append({n: v for n, v in zip(p.Y.names, values)})
    return algorithms.AlgorithmConfig(
        variant=cfg.variant, alpha=cfg.alpha, tol_feas=cfg.tol_feas,
        tol_opt=cfg.tol_opt, max_iter=cfg.max_iter,
        initial_yset=tuple(yset), aux_tie_break=cfg.aux_tie_break,
        node_budget=cfg.node_budget)


def _trace_csv(p: gsip.GsipProblem, result: algorithms.RunResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["k"] + [f"x_{n}" for n in p.X.names] + [
        "f_Lk", "llp_y", "llp_value", "aux_y", "aux_value",
        "sip_value", "added_y", "Yset_size", "status"]
    writer.writerow(header)
    for r in result.trace:
        llp_y = llp_value = ""
        if r.llp is not None:
            llp_y = "infeasible" if r.llp.infeasible else _fmt_point(r.llp.y)
            llp_value = _fmt_real(r.llp.value)
        writer.writerow(
            [r.k] + [_fmt_real(r.x[n]) for n in p.X.names] + [
                _fmt_real(r.f_lower), llp_y, llp_value,
                _fmt_point(r.aux.y) if r.aux else "",
                _fmt_real(r.aux.value) if r.aux else "",
                _fmt_real(r.sip.value) if r.sip else "",
                _fmt_point(r.added_point), r.yset_size_after, result.status])
    return buf.getvalue()


def _trace_json(p: gsip.GsipProblem, result: algorithms.RunResult) -> str:
    def point(pt):
        return None if pt is None else {n: pt[n] for n in sorted(pt)}

    records = []
    for r in result.trace:
        records.append({
            "k": r.k,
            "x": point(r.x),
            "f_Lk": r.f_lower,
            "llp": None if r.llp is None else {
                "y": point(r.llp.y), "value": r.llp.value,
                "infeasible": r.llp.infeasible},
            "aux": None if r.aux is None else {
                "y": point(r.aux.y), "value": r.aux.value},
            "sip_llp": None if r.sip is None else {
                "y": point(r.sip.y), "value": r.sip.value},
            "added_point": point(r.added_point),
            "Yset_size_after": r.yset_size_after,
        })
    doc = {"problem": p.name, "status": result.status,
           "final_lower_bound": result.final_lower_bound, "trace": records}
    return json.dumps(doc, indent=2) + "\n"


def cmd_run(args) -> int:
    p = _load_problem(args)
    cfg = _resolve_initial(_config_from_args(args), p)
    result = algorithms.run(p, cfg)
    text = (_trace_csv if args.format == "csv" else _trace_json)(p, result)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"status={result.status} "
          f"final_lower_bound={_fmt_real(result.final_lower_bound)}")
    return 0


def cmd_verify(args) -> int:
    p = _load_problem(args)
    cfg = _resolve_initial(_config_from_args(args), p)
    result = algorithms.run(p, cfg)

    worst = 0.0
    checks = 0

    def compare(label, k, inst, bnb_value):
        nonlocal worst, checks
        oracle = grid_minimize(inst.objective, inst.constraints, inst.box,
                               args.grid, tol_feas=cfg.tol_feas)
        if not oracle.optimal or bnb_value is None:
            return
        diff = abs(oracle.value - bnb_value)
        worst = max(worst, diff)
        checks += 1
        print(f"k={k} {label}: bnb={_fmt_real(bnb_value)} "
              f"grid={_fmt_real(oracle.value)} diff={diff:.3e}")

    for r in result.trace:
        if r.llp is not None and not r.llp.infeasible:
            compare("llp", r.k, gsip.build_llp(p, r.x), r.llp.value)
        if r.aux is not None and r.llp is not None:
            compare("aux_llp", r.k,
                    gsip.build_aux_llp(p, r.x, r.llp.value, cfg.alpha), r.aux.value)
        sip_inst = gsip.build_sip_llp(p, r.x)
        if r.sip is not None:
            sip_value = r.sip.value
        else:
            sip_value = minimize(sip_inst.objective, sip_inst.constraints,
                                 sip_inst.box, tol_opt=cfg.tol_opt,
                                 tol_feas=cfg.tol_feas).value
        compare("sip_llp", r.k, sip_inst, sip_value)

    print(f"checked {checks} subproblems, max discrepancy {worst:.6e}")
    if worst > args.tol:
        print(f"FAIL: discrepancy exceeds tolerance {args.tol}", file=sys.stderr)
        return 3
    return 0


def cmd_list(args) -> int:
    for p in gsip.builtin_problems():
        print(f"{p.name}: |X|={p.X.dim} |Y|={p.Y.dim} "
              f"f_star={_fmt_real(p.f_star)} f_L={_fmt_real(p.f_L)}")
    return 0


def cmd_fmt(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {args.file}: {e}") from None
    try:
        doc = parse_problem(text)
    except (ProblemSyntaxError, ProblemValidationError) as e:
        raise UsageError(f"{args.file}: {e}") from None
    sys.stdout.write(serialize_problem(doc))
    return 0


def _add_problem_source(sub):
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--problem", help="builtin problem name (see 'list')")
    group.add_argument("--file", help="path to a .gsip problem file")


def _add_run_flags(sub):
    sub.add_argument("--variant", choices=sorted(_VARIANT_ALIASES),
                     default="sip-llp")
    sub.add_argument("--alpha", type=float, default=0.95)
    sub.add_argument("--tol-feas", type=float, default=1e-9)
    sub.add_argument("--tol-opt", type=float, default=1e-13)
    sub.add_argument("--max-iter", type=int, default=50)
    sub.add_argument("--initial-y", action="append", metavar="V1[,V2...]",
                     help="initial discretization point (repeatable)")
    sub.add_argument("--tie-break", choices=algorithms.TIE_BREAKS,
                     default="solver")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gsiplab")
    subs = parser.add_subparsers(dest="command", required=True)

    run_p = subs.add_parser("run", help="run a lower-bounding variant")
    _add_problem_source(run_p)
    _add_run_flags(run_p)
    run_p.add_argument("--output", help="trace output path (default: stdout)")
    run_p.add_argument("--format", choices=("csv", "json"), default="csv")
    run_p.set_defaults(func=cmd_run)

    ver_p = subs.add_parser("verify", help="cross-check against the grid oracle")
    _add_problem_source(ver_p)
    _add_run_flags(ver_p)
    ver_p.set_defaults(variant="llp-only", max_iter=10)
    ver_p.add_argument("--grid", type=int, default=401,
                       help="oracle grid points per axis")
    ver_p.add_argument("--tol", type=float, default=1e-3,
                       help="allowed value discrepancy")
    ver_p.set_defaults(func=cmd_verify)

    list_p = subs.add_parser("list", help="list builtin problems")
    list_p.set_defaults(func=cmd_list)

    fmt_p = subs.add_parser("fmt", help="canonicalize a .gsip file")
    fmt_p.add_argument("file")
    fmt_p.set_defaults(func=cmd_fmt)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (NodeBudgetExceeded, EvaluationError) as e:
        print(f"solver error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
