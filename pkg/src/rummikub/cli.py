"""Command-line front end.

Exit codes: 0 success, 1 bad input or options, 2 table constraint
unsatisfiable, 3 oracle budget exceeded, 4 engines disagree or an
arrangement fails verification, 5 counting memory budget exceeded.
"""
from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager

from .counting import MemoryBudgetExceeded, winning_table, write_csv
from .oracle import BudgetExceeded, OracleBudget, oracle_max_score
from .solver import Infeasible, best_arrangement, is_fully_playable, verify_arrangement
from .tileset import Hand, Problem, ProblemError, TileSetParams, parse_params, parse_problem

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_BUDGET, EXIT_MISMATCH, EXIT_MEMORY = range(6)
DEFAULT_PARAMS = TileSetParams(n=13, k=4, m=2, j=2)


def _load(args) -> Problem:
    if args.problem == "-":
        text = sys.stdin.read()
    else:
        with open(args.problem, encoding="utf-8") as fh:
            text = fh.read()
    problem = parse_problem(text)
    if args.params:
        params = parse_params(args.params.split(","), base=problem.params)
        problem = Problem(params, _regrid(problem.hand, params), _regrid(problem.table, params))
    return problem


def _regrid(hand: Hand, params: TileSetParams) -> Hand:
    """Re-home a hand on a (possibly larger) grid; tiles outside it are an error."""
    return Hand.from_tiles(params, hand.tiles(), hand.jokers)


def _unused(problem: Problem, usage: Hand) -> list[str]:
    left = []
    supply = problem.combined
    for s in range(problem.params.k):
        for v in range(problem.params.n):
            left += [f"{v + 1}:{s + 1}"] * (supply.counts[s][v] - usage.counts[s][v])
    return left + ["J"] * (supply.jokers - usage.jokers)


def run_solve(args, out) -> int:
    problem = _load(args)
    try:
        arrangement = best_arrangement(problem, early_stop=not args.no_early_stop)
    except Infeasible:
        print("table constraint unsatisfiable", file=out)
        return EXIT_INFEASIBLE
    print(f"score {arrangement.score}", file=out)
    for line in arrangement.lines():
        print(line, file=out)
    unused = _unused(problem, arrangement.usage(problem.params))
    print("unused " + (" ".join(unused) if unused else "-"), file=out)
    if args.penalty:
        print(f"joker-penalty {arrangement.joker_penalty(problem)}", file=out)
    return EXIT_OK


def run_check(args, out) -> int:
    problem = _load(args)
    try:
        arrangement = best_arrangement(problem, early_stop=not args.no_early_stop)
    except Infeasible:
        print("table constraint unsatisfiable", file=out)
        return EXIT_INFEASIBLE
    verdict = verify_arrangement(problem, arrangement)
    print(f"score {arrangement.score}", file=out)
    print("verified " + ("ok" if verdict else f"FAILED: {verdict.reason}"), file=out)
    playable = is_fully_playable(problem.combined, problem.params)
    print(f"fully-playable {'true' if playable else 'false'}", file=out)
    return EXIT_OK if verdict else EXIT_MISMATCH


def run_oracle_check(args, out) -> int:
    problem = _load(args)
    budget = OracleBudget(max_tiles=args.budget_tiles, max_nodes=args.budget_nodes)
    try:
        expected = oracle_max_score(problem, budget)
    except BudgetExceeded as exc:
        print(f"oracle budget exceeded: {exc}", file=out)
        return EXIT_BUDGET
    from .solver import max_score
    got = max_score(problem, early_stop=not args.no_early_stop)
    show = lambda x: "infeasible" if x is None else str(x)
    print(f"dp {show(got)}", file=out)
    print(f"oracle {show(expected)}", file=out)
    return EXIT_OK if got == expected else EXIT_MISMATCH


@contextmanager
def _output(path: str | None, default):
    if path and path != "-":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh
    else:
        yield default


def run_count(args, out) -> int:
    params = parse_params(args.params.split(","), base=DEFAULT_PARAMS) if args.params \
        else DEFAULT_PARAMS
    t_from = 0 if args.t_from is None else args.t_from
    if args.t_to is not None:
        t_to = args.t_to
    else:
        t_to = params.total_tiles if args.t_from is None else args.t_from
    if not 0 <= t_from <= t_to <= params.total_tiles:
        raise ProblemError(f"invalid t range {t_from}..{t_to} (0..{params.total_tiles})")
    if args.command == "count":
        method, extra = "totals", {}
    elif args.method == "partition":
        method, extra = "partition", {"threads": args.threads, "shards": args.shards or args.threads,
                                      "max_keys": args.max_keys}
    else:
        method, extra = "sweep", {}
    try:
        rows = winning_table(params, t_from, t_to, method=method, **extra)
    except MemoryBudgetExceeded as exc:
        print(f"memory budget exceeded: {exc}; last completed t={exc.last_completed_t}",
              file=sys.stderr)
        return EXIT_MEMORY
    with _output(args.out, out) as fh:
        write_csv(rows, fh)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rummikub", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--params", help="overrides, e.g. n=13,k=4,m=2,j=2")
        p.add_argument("--no-early-stop", action="store_true",
                       help="disable stopping once every remaining tile is placed")

    for name, help_ in (("solve", "maximise the score of a problem file"),
                        ("check", "solve, verify the arrangement, and answer the decision problem"),
                        ("oracle", "compare the DP with exhaustive search")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("problem", help="problem file, or - for stdin")
        common(p)
        if name == "solve":
            p.add_argument("--penalty", action="store_true",
                           help="also report the penalty for unplaced jokers")
        if name == "oracle":
            p.add_argument("--budget-nodes", type=int, default=2_000_000)
            p.add_argument("--budget-tiles", type=int, default=16)

    for name, help_ in (("count", "CSV of hand totals per size"),
                        ("winning", "CSV of hand totals, winning hands and ratio per size")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--params", help="overrides, e.g. n=6,k=4,m=2")
        p.add_argument("--t-from", type=int)
        p.add_argument("--t-to", type=int)
        p.add_argument("--out", help="output path (default stdout)")
        if name == "winning":
            p.add_argument("--method", choices=("sweep", "partition"), default="sweep")
            p.add_argument("--threads", type=int, default=1)
            p.add_argument("--shards", type=int, default=0)
            p.add_argument("--max-keys", type=int, default=None)
    return parser


COMMANDS = {"solve": run_solve, "check": run_check, "oracle": run_oracle_check,
            "count": run_count, "winning": run_count}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except (ProblemError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
