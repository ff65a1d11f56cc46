"""Command-line entry point: ``discrete-geodesics {solve,study,counterexample,gradcheck}``.

Exit codes: 0 success, 1 configuration error, 2 non-convergence, 3 numeric error
(including a failed gradient check).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict

from .config import ConfigError, load_problem
from .objectives import NondifferentiableError
from .solver import SolverError, minimize
from .study import counterexample, gradcheck, rows_csv, run_study, study_csv

EXIT_OK, EXIT_CONFIG, EXIT_NONCONVERGED, EXIT_NUMERIC = 0, 1, 2, 3


def _int_list(text: str):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _emit(text: str, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    problem = load_problem(args.config)
    report = minimize(problem.objective(), problem.x0, problem.x1, problem.n, problem.solver)
    _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.out)
    if not report.converged:
        print(f"solver did not converge: {report.message}", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_study(args) -> int:
    problem = load_problem(args.config)
    rules = ("trapezoidal", "left") if args.rule == "both" else (args.rule,)
    records, fits, _ = run_study(problem, args.n_list, rules)
    _emit(study_csv(records, fits), args.out)
    return EXIT_OK if all(r.converged for r in records) else EXIT_NONCONVERGED


def cmd_counterexample(args) -> int:
    rows = counterexample(args.n_list)
    _emit(rows_csv(rows), args.out)
    return EXIT_OK


def cmd_gradcheck(args) -> int:
    problem = load_problem(args.config)
    results = gradcheck(problem.metric, problem.x0, problem.x1, problem.functional.value,
                        samples=args.samples, seed=args.seed, n=args.n)
    report = {"metric": problem.metric.name, "results": [asdict(r) for r in results],
              "passed": all(r.passed for r in results)}
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK if report["passed"] else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="discrete-geodesics",
                                description="Minimal geodesics by discrete energy minimization.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one problem, print the report as JSON")
    s.add_argument("config")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("study", help="convergence study over a ladder of N, CSV output")
    s.add_argument("config")
    s.add_argument("--n-list", type=_int_list, default=None)
    s.add_argument("--rule", choices=["trapezoidal", "left", "both"], default="both")
    s.add_argument("--out")
    s.set_defaults(func=cmd_study)

    s = sub.add_parser("counterexample", help="discrete length vs energy minimization on f = 2 - cos x1")
    s.add_argument("--n-list", type=_int_list, default=[8, 16, 32, 64])
    s.add_argument("--out")
    s.set_defaults(func=cmd_counterexample)

    s = sub.add_parser("gradcheck", help="analytic vs finite-difference gradients")
    s.add_argument("config")
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--n", type=int, default=16)
    s.add_argument("--out")
    s.set_defaults(func=cmd_gradcheck)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, NondifferentiableError, FloatingPointError, ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
