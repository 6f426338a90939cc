"""Command line front end.

Subcommands: validate, check, solve, stats. Exit codes:
  0   success (valid instance / satisfied solution / solution found)
  2   the instance (or solution file) failed to parse or validate
  3   usage error
  10  candidate solution violated (or cost/domain/variable mismatch)
  11  candidate solution incomplete
  20  no solution exists (or zero solutions counted)
  21  search stopped on a node or time limit
"""

from __future__ import annotations

import argparse
import sys
import xml.etree.ElementTree as ET
from typing import List, Optional, Sequence, Tuple

from .canonical import render_instance
from .checker import CheckMode, VerdictKind, check_solution, scope_of
from .errors import CheckError, CostMismatch, ParseError, SolverError, XcspError
from .model import Instance, Instantiation, Value
from .parser import (
    ParserConfig,
    _wrap,
    parse_file,
    read_int_values,
    read_var_ids,
)
from .solver import SearchConfig, SolveResult, Status, VarOrder, solve

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_USAGE = 3
EXIT_VIOLATED = 10
EXIT_INCOMPLETE = 11
EXIT_UNSAT = 20
EXIT_LIMIT = 21


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="xcsp3core",
                             description="Parse, check and solve XCSP3-core instances.")
    sub = parser.add_subparsers(dest="command", metavar="command")

    def add_common(p: _ArgumentParser) -> None:
        p.add_argument("instance", help="instance XML file")
        mode = p.add_mutually_exclusive_group()
        mode.add_argument("--strict", dest="lenient", action="store_false",
                          help="fail on anything outside the core (default)")
        mode.add_argument("--lenient", action="store_true",
                          help="skip unsupported constraints instead of failing")
        p.set_defaults(lenient=False)
        p.add_argument("--drop-class", action="append", default=[],
                       metavar="NAME", help="ignore constraints tagged with this class")

    p_validate = sub.add_parser("validate", help="parse and validate an instance")
    add_common(p_validate)
    p_validate.add_argument("--canonical-out", metavar="PATH",
                            help="write the canonical form here ('-' for stdout)")

    p_check = sub.add_parser("check", help="verify a candidate solution")
    add_common(p_check)
    p_check.add_argument("solution", nargs="?", default=None,
                         help="solution file (instantiation XML or values)")
    p_check.add_argument("--solution", dest="solution_opt", metavar="PATH",
                         help="alternative spelling of the solution file argument")
    p_check.add_argument("--vars", metavar="IDS",
                         help="variable ids for a bare value list")
    p_check.add_argument("--cost", type=int, default=None,
                         help="declared objective value to verify")
    p_check.add_argument("--allow-partial", action="store_true",
                         help="accept partial assignments when no checked "
                              "constraint is violated")

    p_solve = sub.add_parser("solve", help="search for solutions")
    add_common(p_solve)
    p_solve.add_argument("--count", action="store_true",
                         help="count all solutions instead of printing one")
    p_solve.add_argument("--all", action="store_true",
                         help="print every solution")
    p_solve.add_argument("--optimize", action="store_true",
                         help="insist on optimization (reject CSP instances)")
    p_solve.add_argument("--max-solutions", type=int, default=None, metavar="N")
    p_solve.add_argument("--node-limit", type=int, default=None, metavar="N")
    p_solve.add_argument("--time-limit", type=float, default=None, metavar="SECONDS")
    p_solve.add_argument("--order", choices=[o.value for o in VarOrder],
                         default=VarOrder.DECLARATION.value)
    p_solve.add_argument("--restrict-to-decision", action="store_true",
                         help="branch only on the decision annotation")

    p_stats = sub.add_parser("stats", help="print instance statistics")
    add_common(p_stats)
    return parser


def _parser_config(args: argparse.Namespace) -> ParserConfig:
    return ParserConfig(strict=not args.lenient,
                        drop_classes=frozenset(args.drop_class))


def _load(args: argparse.Namespace) -> Instance:
    return parse_file(args.instance, _parser_config(args))


# -- solution files ---------------------------------------------------------------

def _read_solution(path: str, instance: Instance,
                   var_spec: Optional[str]) -> Tuple[Instantiation, Optional[int]]:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    arrays = instance.arrays_by_id
    if text.lstrip().startswith("<"):
        if var_spec is not None:
            raise _UsageError("--vars only applies to bare value lists")
        try:
            root = _wrap(ET.fromstring(text), "/instantiation")
        except ET.ParseError as e:
            raise ParseError(f"malformed XML: {e}", path="/", rule="xml") from None
        if root.tag != "instantiation":
            raise ParseError(f"solution root must be <instantiation>, "
                             f"not <{root.tag}>", path=root.path, rule="solution")
        list_el = root.find("list")
        values_el = root.find("values")
        if list_el is None or values_el is None:
            raise ParseError("instantiation needs <list> and <values>",
                             path=root.path, rule="solution")
        ids = read_var_ids(list_el.text, arrays, list_el.path)
        values = read_int_values(values_el.text, values_el.path,
                                 allow_vxk=True, allow_star=True)
        cost_text = root.attr("cost")
        cost = int(cost_text) if cost_text is not None else None
    else:
        if var_spec is not None:
            ids = read_var_ids(var_spec, arrays, "--vars")
        else:
            ids = [v.id for v in instance.variables() if v.domain is not None]
        values = read_int_values(text, path, allow_vxk=True, allow_star=True)
        cost = None
    if len(ids) != len(values):
        raise ParseError(f"{len(ids)} variables for {len(values)} values",
                         path=path, rule="solution")
    return Instantiation(zip(ids, values)), cost


def _print_instantiation(sol: Instantiation, kind: str,
                         cost: Optional[object] = None) -> None:
    ids = list(sol)
    head = f'<instantiation type="{kind}"' + (
        f' cost="{cost}"' if cost is not None else "") + ">"
    print(head)
    print("  <list> " + " ".join(ids) + " </list>")
    print("  <values> " + " ".join(str(sol[i]) for i in ids) + " </values>")
    print("</instantiation>")


# -- subcommands ------------------------------------------------------------------

def _kind_histogram(instance: Instance) -> dict:
    histogram: dict = {}
    for posted in instance.constraints:
        name = type(posted.kind).__name__
        histogram[name] = histogram.get(name, 0) + 1
    return histogram


def _cmd_validate(args: argparse.Namespace) -> int:
    instance = _load(args)
    n_vars = sum(1 for _ in instance.variables())
    print(f"valid {instance.framework.value} instance: {n_vars} variables, "
          f"{len(instance.constraints)} constraints")
    histogram = _kind_histogram(instance)
    for name in sorted(histogram):
        print(f"kind.{name}={histogram[name]}")
    if instance.objective is not None:
        print(f"objective={instance.objective.sense.value}:"
              f"{instance.objective.kind.value}")
    if args.canonical_out:
        text = render_instance(instance)
        if args.canonical_out == "-":
            sys.stdout.write(text)
        else:
            with open(args.canonical_out, "w", encoding="utf-8") as fh:
                fh.write(text)
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    if args.solution is not None and args.solution_opt is not None:
        raise _UsageError("give the solution file once, not twice")
    solution_path = args.solution if args.solution is not None else args.solution_opt
    if solution_path is None:
        raise _UsageError("check needs a solution file")
    instance = _load(args)
    solution, file_cost = _read_solution(solution_path, instance, args.vars)
    declared = args.cost if args.cost is not None else file_cost
    mode = CheckMode.PARTIAL_ALLOWED if args.allow_partial else CheckMode.TOTAL_REQUIRED
    try:
        verdict = check_solution(instance, solution, mode, declared_cost=declared)
    except CheckError as e:
        print(f"rejected: {e}", file=sys.stderr)
        return EXIT_VIOLATED
    if verdict.kind is VerdictKind.SATISFIED:
        if declared is not None:
            print(f"satisfied, cost verified: {declared}")
        else:
            print("satisfied")
        return EXIT_OK
    if verdict.kind is VerdictKind.VIOLATED:
        print("violated: " + " ".join(verdict.violated))
        return EXIT_VIOLATED
    print("incomplete: missing " + " ".join(verdict.missing))
    return EXIT_INCOMPLETE


def _search_config(args: argparse.Namespace, keep: bool) -> SearchConfig:
    max_solutions = args.max_solutions
    if not args.count and not args.all and max_solutions is None \
            and args.command == "solve":
        max_solutions = 1
    return SearchConfig(
        max_solutions=max_solutions,
        node_limit=args.node_limit,
        time_limit=args.time_limit,
        var_order=VarOrder(args.order),
        restrict_to_decision=args.restrict_to_decision,
        keep_solutions=keep,
    )


def _cmd_solve(args: argparse.Namespace) -> int:
    instance = _load(args)
    is_cop = instance.objective is not None
    if args.optimize and not is_cop:
        raise _UsageError("--optimize needs an instance with an objective")
    keep = not args.count
    result = solve(instance, _search_config(args, keep))
    if args.count:
        print(f"solutions={result.count}")
        print(f"nodes={result.nodes}")
        if result.status is Status.LIMIT:
            print("LIMIT")
            return EXIT_LIMIT
        return EXIT_OK if result.count else EXIT_UNSAT
    if result.status is Status.LIMIT:
        if is_cop and result.best is not None:
            _print_instantiation(result.best, "solution", result.best_cost)
        print("LIMIT")
        return EXIT_LIMIT
    if result.status is Status.UNSATISFIABLE:
        print("UNSATISFIABLE")
        return EXIT_UNSAT
    if is_cop:
        _print_instantiation(result.best, "optimum", result.best_cost)
    elif args.all:
        for sol in result.solutions:
            _print_instantiation(sol, "solution")
        print(f"solutions={result.count}")
    else:
        for sol in result.solutions[:1]:
            _print_instantiation(sol, "solution")
    return EXIT_OK


def _cmd_stats(args: argparse.Namespace) -> int:
    instance = _load(args)
    print(f"framework={instance.framework.value}")
    print(f"variables={sum(1 for _ in instance.variables())}")
    print(f"arrays={len(instance.arrays)}")
    sizes = [v.domain.size for v in instance.variables() if v.domain is not None]
    if sizes:
        print(f"domain.size.min={min(sizes)}")
        print(f"domain.size.max={max(sizes)}")
    print(f"constraints={len(instance.constraints)}")
    histogram = _kind_histogram(instance)
    for name in sorted(histogram):
        print(f"kind.{name}={histogram[name]}")
    arities: dict = {}
    for posted in instance.constraints:
        n = len(scope_of(posted.kind))
        arities[n] = arities.get(n, 0) + 1
    for n in sorted(arities):
        print(f"arity.{n}={arities[n]}")
    if instance.objective is not None:
        print(f"objective={instance.objective.sense.value}:"
              f"{instance.objective.kind.value}")
    if instance.decision is not None:
        print(f"decision={len(instance.decision)}")
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "check": _cmd_check,
    "solve": _cmd_solve,
    "stats": _cmd_stats,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except SolverError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except XcspError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
