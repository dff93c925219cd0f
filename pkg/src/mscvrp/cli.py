"""Command-line entry point: solve, bench, features, compare."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from . import bench
from .features import export_dataset, feature_vector
from .instance import InstanceError, read_bks, read_instance
from .solution import gap, is_feasible, read_solution, write_solution
from .solver import GUIDED, PLAIN, SolverConfig, solve
from .stats import DEFAULT_ALPHA, InsufficientDataError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISSING = 3


class _MissingInput(Exception):
    pass


def _need_file(path: str, what: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise _MissingInput(f"{what} not found: {path}")
    return p


def _bks_for(table: dict, instance_name: str, path: Path) -> Optional[float]:
    for key in (instance_name, path.stem):
        if key in table:
            return table[key]
    return None


def cmd_solve(args) -> int:
    path = _need_file(args.instance, "instance")
    inst = read_instance(path)
    config = SolverConfig(mode=GUIDED if args.guided else PLAIN, enable_pr=not args.no_pr,
                          t_max=args.time_limit, seed=args.seed, max_iterations=args.max_iterations)
    res = solve(inst, config)
    print(f"instance {inst.name}")
    print(f"best cost {res.cost}")
    print(f"routes {res.best.n_routes}")
    print(f"iterations {res.iterations}")
    if args.bks:
        bks = _bks_for(read_bks(_need_file(args.bks, "BKS table")), inst.name, path)
        if bks is None:
            print(f"no BKS entry for {inst.name}", file=sys.stderr)
        else:
            print(f"gap {gap(res.cost, bks):.2f}%")
    if args.sol_out:
        write_solution(args.sol_out, res.best)
    if args.trace:
        Path(args.trace).write_text(res.trace_json() + "\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    directory = Path(args.instances)
    if not directory.is_dir():
        raise _MissingInput(f"instance directory not found: {args.instances}")
    bks = read_bks(_need_file(args.bks, "BKS table"))
    instances = bench.load_instances(directory)
    if not instances:
        raise _MissingInput(f"no .vrp files in {args.instances}")
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    configs = {m: bench.mode_config(m, args.time_limit) for m in modes}
    reports = bench.run_suite(instances, configs, args.runs, bks, jobs=args.jobs)
    ordered = [reports[m] for m in modes]
    bench.write_report_csv(ordered, args.out)
    if args.json:
        bench.write_report_json(ordered, args.json)
    for rep in ordered:
        for col, agg in rep.aggregate().items():
            print(f"{rep.mode} {col}: " + " ".join(f"{k}={v:.2f}" for k, v in agg.items()))
    return EXIT_OK


def cmd_features(args) -> int:
    inst = read_instance(_need_file(args.instance, "instance"))
    sol = read_solution(_need_file(args.solution, "solution"), inst)
    ok, msg = is_feasible(sol)
    if not ok:
        print(f"solution is infeasible: {msg}", file=sys.stderr)
        return EXIT_USAGE
    fv = feature_vector(inst, sol, args.label)
    n = export_dataset([(inst.name, fv)], args.out, append=True)
    print(f"appended {n} row to {args.out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    _need_file(args.a, "report")
    _need_file(args.b, "report")
    res, common = bench.compare_reports(args.a, args.b, args.mode_a, args.mode_b)
    print(f"paired instances: {len(common)}")
    print(bench.format_verdict(res, args.alpha))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mscvrp", description="Multiple Search CVRP solver")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--time-limit", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--guided", action="store_true")
    p.add_argument("--no-pr", action="store_true")
    p.add_argument("--max-iterations", type=int)
    p.add_argument("--bks", help="CSV with instance,bks columns")
    p.add_argument("--sol-out")
    p.add_argument("--trace")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="multi-run benchmark over a directory")
    p.add_argument("--instances", required=True)
    p.add_argument("--bks", required=True)
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--time-limit", type=float, required=True)
    p.add_argument("--modes", default="plain,guided")
    p.add_argument("--out", default="report.csv")
    p.add_argument("--json")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("features", help="append a feature row for a solution")
    p.add_argument("--instance", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("--label", type=int, choices=(0, 1))
    p.add_argument("--out", default="features.csv")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("compare", help="one-tailed Wilcoxon test on two reports")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--mode-a")
    p.add_argument("--mode-b")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.set_defaults(func=cmd_compare)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except _MissingInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (InstanceError, InsufficientDataError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
