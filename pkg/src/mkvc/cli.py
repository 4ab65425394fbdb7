"""Command-line interface: gen, solve, bench, verify.

Exit codes: 0 success, 1 instance/solver error, 2 verification failure,
64 usage error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .bench import run_matrix, write_csv
from .errors import MkvcError
from .fileio import read_instance, write_instance
from .generate import GenKind, GenSpec, generate
from .graph import Side, covered_weight
from .reduction import ratio_transfer, scale_weights
from .solvers import (
    ORACLE_BUDGET, SolverKind, SolverSpec, build_solver,
)
from .verify import run_verification

USAGE_EXIT = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _side(text: str) -> Side:
    if text in ("left", "L"):
        return Side.LEFT
    if text in ("right", "R"):
        return Side.RIGHT
    raise argparse.ArgumentTypeError("side must be left or right")


def _build_parser() -> _Parser:
    parser = _Parser(prog="mkvc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance file")
    gen.add_argument("--kind", choices=[k.value for k in GenKind],
                     default="uniform")
    gen.add_argument("--n-left", type=int, default=4)
    gen.add_argument("--n-right", type=int, default=4)
    gen.add_argument("--edge-prob", type=float, default=0.5)
    gen.add_argument("--d-left", type=int, default=0)
    gen.add_argument("--d-right", type=int, default=0)
    gen.add_argument("--weight-min", type=int, default=1)
    gen.add_argument("--weight-max", type=int, default=100)
    gen.add_argument("--k", type=int, default=None)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--output", "-o", required=True)

    solve = sub.add_parser("solve", help="solve one instance file")
    solve.add_argument("instance")
    solve.add_argument("--algorithm", required=True,
                       choices=[k.value for k in SolverKind])
    solve.add_argument("--base", default="greedy",
                       choices=["greedy", "exact", "topside", "semiregular"])
    solve.add_argument("--c", type=int, default=3)
    solve.add_argument("--x-size", type=int, default=0)
    solve.add_argument("--side", type=_side, default=Side.LEFT)
    solve.add_argument("--epsilon", type=Fraction, default=Fraction(1, 10))
    solve.add_argument("--max-depth", type=int, default=2)
    solve.add_argument("--scale-ell", type=int, default=None)
    solve.add_argument("--oracle-budget", type=int, default=ORACLE_BUDGET)

    bench = sub.add_parser("bench", help="run solvers over a directory")
    bench.add_argument("directory")
    bench.add_argument("--oracle", action="store_true")
    bench.add_argument("--oracle-budget", type=int, default=ORACLE_BUDGET)
    bench.add_argument("--solvers", default="greedy,alg2",
                       help="comma-separated solver names")
    bench.add_argument("--jobs", type=int, default=1)
    bench.add_argument("--output", "-o", default=None)

    verify = sub.add_parser("verify", help="run the invariant suite")
    verify.add_argument("--small-n", type=int, default=6)
    verify.add_argument("--seed", type=int, default=20260810)
    return parser


def _solver_spec(name: str, args=None) -> SolverSpec:
    kind = SolverKind(name)
    if kind in (SolverKind.ALG1, SolverKind.ALG2, SolverKind.PTAS):
        base = SolverSpec(SolverKind(args.base if args else "greedy"))
        if args is None:
            return SolverSpec(kind, base=base, epsilon=Fraction(1, 10))
        return SolverSpec(kind, base=base, c=args.c, x_size=args.x_size,
                          side=args.side, epsilon=args.epsilon,
                          max_depth=args.max_depth,
                          oracle_budget=args.oracle_budget)
    if args is None:
        return SolverSpec(kind)
    return SolverSpec(kind, side=args.side, oracle_budget=args.oracle_budget)


def _cmd_gen(args) -> int:
    spec = GenSpec(kind=GenKind(args.kind), n_left=args.n_left,
                   n_right=args.n_right, edge_prob=args.edge_prob,
                   d_left=args.d_left, d_right=args.d_right,
                   weight_min=args.weight_min, weight_max=args.weight_max,
                   k=args.k, seed=args.seed)
    inst = generate(spec)
    write_instance(inst, args.output)
    print(f"wrote {args.output}: n_left={inst.n_left} n_right={inst.n_right} "
          f"m={inst.m} k={inst.k}")
    return 0


def _format_vertices(sol) -> str:
    return " ".join(f"{'L' if s == Side.LEFT else 'R'}{i}"
                    for s, i in sol.sorted_vertices())


def _cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    solver = build_solver(_solver_spec(args.algorithm, args))
    if args.scale_ell is not None:
        scaled, receipt = scale_weights(inst, args.scale_ell)
        sol = solver.run(scaled)
        original_value = covered_weight(inst, sol.vertices)
        print(f"scaled with {receipt.scale_note}")
        print(f"scaled_value {sol.covered_weight}")
        print(f"value {original_value}")
        print(f"vertices {_format_vertices(sol)}")
        print(f"transfer_guarantee {ratio_transfer(solver.rho, inst.n, args.scale_ell)}")
    else:
        sol = solver.run(inst)
        print(f"value {sol.covered_weight}")
        print(f"vertices {_format_vertices(sol)}")
    return 0


def _cmd_bench(args) -> int:
    directory = Path(args.directory)
    files = sorted(directory.glob("*.mkvc")) + sorted(directory.glob("*.txt"))
    if not files:
        print(f"error: no instance files in {directory}", file=sys.stderr)
        return 1
    instances = [(f.stem, read_instance(f)) for f in files]
    solvers = [build_solver(_solver_spec(name.strip()))
               for name in args.solvers.split(",") if name.strip()]
    records = run_matrix(instances, solvers, oracle=args.oracle,
                         oracle_budget=args.oracle_budget, jobs=args.jobs)
    if args.output:
        with open(args.output, "w", encoding="ascii") as fh:
            write_csv(records, fh)
    else:
        write_csv(records, sys.stdout)
    errors = [r for r in records if r.error]
    for rec in errors[:5]:
        print(f"error: {rec.instance_id}/{rec.solver}: {rec.error}",
              file=sys.stderr)
    return 1 if errors else 0


def _cmd_verify(args) -> int:
    ok = run_verification(small_n=args.small_n, seed=args.seed, out=print)
    return 0 if ok else 2


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else USAGE_EXIT
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "verify":
            return _cmd_verify(args)
    except MkvcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
