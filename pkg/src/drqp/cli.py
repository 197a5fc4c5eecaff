"""Command-line interface.

Verbs: solve, certify, oracle-compare, trace. Exit codes: 0 solved,
2 primal infeasible, 3 dual infeasible, 4 both, 5 iteration limit,
1 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

import numpy as np

from .displacement import verify_identities
from .engine import EXIT_CODES, SolveResult, SolverConfig, run
from .io import ProblemFormatError, parse_problem, result_to_json, write_trace
from .linalg import ProductVector
from .oracle import OracleError, canonical_instances, oracle_vd, oracle_vp
from .qp import QpProblem, QpSplitting

IDENTITY_TOL = 1e-5


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-iter", type=int, default=SolverConfig.max_iter)
    parser.add_argument("--eps-solved", type=float, default=SolverConfig.eps_solved)
    parser.add_argument("--eps-inf", type=float, default=SolverConfig.eps_inf)
    parser.add_argument("--window", type=int, default=SolverConfig.window)
    parser.add_argument("--s0", default="zero", help="zero | random:<seed>")


def build_parser() -> _Parser:
    parser = _Parser(prog="drqp", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    p_solve = sub.add_parser("solve", help="solve a problem file, print result JSON")
    p_solve.add_argument("file")
    p_solve.add_argument("--out", help="write the result JSON here instead of stdout")
    _add_solver_flags(p_solve)

    p_cert = sub.add_parser("certify", help="solve plus the full identity report")
    p_cert.add_argument("file")
    p_cert.add_argument("--out")
    _add_solver_flags(p_cert)

    p_cmp = sub.add_parser("oracle-compare", help="engine vs projected-gradient oracle gaps")
    p_cmp.add_argument("target", help="canonical instance name (E1..E4) or a problem file")
    _add_solver_flags(p_cmp)

    p_trace = sub.add_parser("trace", help="solve and write a per-interval CSV trace")
    p_trace.add_argument("file")
    p_trace.add_argument("--out", required=True, help="CSV output path")
    _add_solver_flags(p_trace)

    return parser


def _config_from(args) -> SolverConfig:
    return SolverConfig(
        max_iter=args.max_iter,
        eps_solved=args.eps_solved,
        eps_inf=args.eps_inf,
        window=args.window,
    )


def _s0_from(args, problem: QpProblem) -> Optional[ProductVector]:
    choice = args.s0
    if choice == "zero":
        return None
    if choice.startswith("random:"):
        try:
            seed = int(choice.split(":", 1)[1])
        except ValueError:
            raise _UsageError(f"invalid --s0 seed in {choice!r}")
        rng = np.random.default_rng(seed)
        return ProductVector(rng.standard_normal(problem.n), rng.standard_normal(problem.m))
    raise _UsageError(f"invalid --s0 value {choice!r}; expected zero or random:<seed>")


def _emit(payload: dict, out: Optional[str]) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _solve(args, with_report: bool, collect_trace: bool = False) -> tuple[SolveResult, dict]:
    problem = parse_problem(args.file)
    split = QpSplitting(problem)
    config = _config_from(args)
    result = run(split, config, s0=_s0_from(args, problem), collect_trace=collect_trace)
    report = verify_identities(split, result.certificates, IDENTITY_TOL) if with_report else None
    return result, result_to_json(result, report)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verb in ("solve", "certify"):
            result, payload = _solve(args, with_report=args.verb == "certify")
            _emit(payload, args.out)
            return EXIT_CODES[result.status]
        if args.verb == "trace":
            result, payload = _solve(args, with_report=False, collect_trace=True)
            write_trace(result.trace or [], args.out)
            _emit(payload, None)
            return EXIT_CODES[result.status]
        if args.verb == "oracle-compare":
            return _oracle_compare(args)
        raise _UsageError(f"unknown verb {args.verb!r}")
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ProblemFormatError, OracleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _oracle_compare(args) -> int:
    instances = canonical_instances()
    if args.target in instances:
        problem = instances[args.target]
    else:
        problem = parse_problem(args.target)
    split = QpSplitting(problem)
    result = run(split, _config_from(args), s0=_s0_from(args, problem))

    vp_oracle = oracle_vp(problem)
    vd_oracle = oracle_vd(problem)
    vp_engine = result.certificates.vp.stacked()
    vd_engine = result.certificates.vd.stacked()
    v_engine = result.v_hat.stacked()
    payload = {
        "target": args.target,
        "status": result.status.value,
        "iterations": result.iterations,
        "oracle_vp": vp_oracle.tolist(),
        "oracle_vd": vd_oracle.tolist(),
        "engine_vp": vp_engine.tolist(),
        "engine_vd": vd_engine.tolist(),
        "vp_gap": float(np.linalg.norm(vp_oracle - vp_engine)),
        "vd_gap": float(np.linalg.norm(vd_oracle - vd_engine)),
        "v_gap": float(np.linalg.norm(vp_oracle + vd_oracle - v_engine)),
    }
    _emit(payload, None)
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
