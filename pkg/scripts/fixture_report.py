#!/usr/bin/env python3
"""Summarize every instance in a fixture directory, optionally solving each.

Prints one row per instance: framework, variable and constraint counts, the
constraint kinds present, and (with --solve) the solution count or optimum.
"""

import argparse
import sys
import time
from pathlib import Path

from xcsp3core.parser import parse_file
from xcsp3core.solver import SearchConfig, Status, count_solutions, solve


def describe(path: Path, do_solve: bool, node_limit: int) -> str:
    instance = parse_file(str(path))
    kinds = sorted({type(p.kind).__name__ for p in instance.constraints})
    n_vars = sum(1 for _ in instance.variables())
    row = (f"{path.name:28} {instance.framework.value:3} "
           f"{n_vars:3} vars {len(instance.constraints):3} ctrs  "
           f"{','.join(kinds)}")
    if not do_solve:
        return row
    started = time.monotonic()
    if instance.objective is not None:
        result = solve(instance, SearchConfig(node_limit=node_limit))
        if result.status is Status.OPTIMUM:
            verdict = f"optimum={result.best_cost}"
        elif result.status is Status.LIMIT:
            verdict = "limit"
        else:
            verdict = "unsat"
    else:
        result = count_solutions(instance, SearchConfig(node_limit=node_limit))
        verdict = (f"solutions={result.count}"
                   if result.status is not Status.LIMIT else "limit")
    return f"{row}  [{verdict} in {time.monotonic() - started:.2f}s]"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    default_dir = Path(__file__).resolve().parents[1] / "tests" / "fixtures"
    parser.add_argument("directory", nargs="?", default=str(default_dir),
                        help="directory of instance XML files")
    parser.add_argument("--solve", action="store_true",
                        help="also count solutions / find the optimum")
    parser.add_argument("--node-limit", type=int, default=2_000_000,
                        help="search budget per instance when solving")
    args = parser.parse_args()
    paths = sorted(Path(args.directory).glob("*.xml"))
    if not paths:
        print(f"no instances under {args.directory}", file=sys.stderr)
        return 1
    for path in paths:
        print(describe(path, args.solve, args.node_limit))
    return 0


if __name__ == "__main__":
    sys.exit(main())
