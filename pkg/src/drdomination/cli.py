"""Command-line front end: ``drdom {solve,kernel,compress,power,decompose,harness}``.

Exit codes: 0 success (or "yes" for a budgeted solve), 1 "no" for a budgeted
solve or a failing harness run, 2 usage/input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from .decomposition import modular_decomposition, structural_params
from .generators import FAMILIES, NAMED_QUOTIENTS, GeneratorSpec
from .graph import (GraphParseError, brute_force_min, format_edge_list, graph_power, is_dr_dominating,
                    read_edge_list)
from .harness import DEFAULT_TIMEOUT, run_harness
from .reductions import build_ilp, expand_ilp_solution, kernelize_nd, reduce_to_colored, solve_ilp_enumeration
from .solver import EXTENDED, PAPER, ModularDP

SOLVE_METHODS = ("auto", "brute", "dp-paper", "dp-extended", "ilp")


class CliError(Exception):
    pass


def _load(path):
    try:
        return read_edge_list(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    except GraphParseError as exc:
        raise CliError(f"{path}: {exc}") from None


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _solve_with(method: str, g, d: int, r: int, cap: int | None):
    if method == "auto":
        method = "brute" if g.n <= 10 else "dp-extended"
    if method == "brute":
        return method, brute_force_min(g, d, r, cap=cap).vertices, None
    gp = graph_power(g, r)
    if method == "ilp":
        inst = build_ilp(gp, d, g.n)
        sol = solve_ilp_enumeration(inst)
        return method, expand_ilp_solution(gp, inst, sol), None
    dp = ModularDP(gp, d)
    variant = PAPER if method == "dp-paper" else EXTENDED
    return method, dp.witness(variant), dp


def cmd_solve(args) -> int:
    g = _load(args.input)
    if args.d < 1 or args.r < 1:
        raise CliError("-d and -r must be positive")
    start = time.perf_counter()
    method, vertices, dp = _solve_with(args.method, g, args.d, args.r, args.oracle_cap)
    ms = round((time.perf_counter() - start) * 1000, 3)
    valid = is_dr_dominating(g, args.d, args.r, vertices)
    params = structural_params(g)
    if args.dump_tables and dp is not None:
        variant = PAPER if method == "dp-paper" else EXTENDED
        _write(dp.tables_json(variant) + "\n", args.dump_tables)
    report = {
        "n": g.n, "m": g.m, "d": args.d, "r": args.r, "params": params.as_dict(),
        "methods": {method: {"size": len(vertices), "ms": ms, "valid": valid}},
        "divergences": [], "seed": None, "solution": list(vertices),
    }
    if args.budget is not None:
        report["budget"] = args.budget
        report["answer"] = "yes" if len(vertices) <= args.budget else "no"
    if args.json:
        print(json.dumps(report))
    else:
        print(f"n={g.n} m={g.m} d={args.d} r={args.r} mw={params.mw} nd={params.nd} itp={params.itp}")
        print(f"{method}: size {len(vertices)} ({ms} ms, {'verified' if valid else 'NOT VERIFIED'})")
        print("solution:", " ".join(map(str, vertices)))
        if args.budget is not None:
            print(f"budget {args.budget}: {report['answer']}")
    if not valid:
        return 2
    if args.budget is not None:
        return 0 if len(vertices) <= args.budget else 1
    return 0


def cmd_kernel(args) -> int:
    g = _load(args.input)
    kg, vmap, rep = kernelize_nd(g, args.d, args.r)
    header = f"kernel of {args.input} for d={args.d} r={args.r}; vertex map: {' '.join(map(str, vmap))}"
    _write(format_edge_list(kg, header), args.output)
    info = rep.as_dict()
    info["vertex_map"] = list(vmap)
    print(json.dumps(info), file=sys.stderr if args.output in (None, "-") else sys.stdout)
    return 0


def cmd_compress(args) -> int:
    g = _load(args.input)
    k = g.n if args.budget is None else args.budget
    if args.target == "colored":
        if not g.is_connected():
            raise CliError("colored compression requires a connected input graph")
        ci = reduce_to_colored(g, args.r, k)
        _write(ci.to_json() + "\n", args.output)
        info = {"target": "colored", "h_vertices": ci.quotient.n, "budget": ci.budget,
                "mw_power": modular_decomposition(graph_power(g, args.r)).width}
    else:
        inst = build_ilp(graph_power(g, args.r), args.d, k)
        _write(inst.to_lp(), args.output)
        info = {"target": "ilp", "itp": inst.itp, "d": args.d, "budget": k, **inst.encoding_size()}
    print(json.dumps(info), file=sys.stderr if args.output in (None, "-") else sys.stdout)
    return 0


def cmd_power(args) -> int:
    g = _load(args.input)
    if args.r < 1:
        raise CliError("-r must be positive")
    _write(format_edge_list(graph_power(g, args.r)), args.output)
    return 0


def cmd_decompose(args) -> int:
    g = _load(args.input)
    tree = modular_decomposition(g)
    params = structural_params(g, tree)
    if args.json:
        print(json.dumps({"params": params.as_dict(), "tree": tree.root.to_dict()}))
    else:
        print(f"mw={params.mw} nd={params.nd} itp={params.itp}")
        print(tree.to_json())
    return 0


def cmd_harness(args) -> int:
    d_values = [args.d] if args.d else list(range(1, args.dmax + 1))
    r_values = [args.r] if args.r else list(range(1, args.rmax + 1))
    sizes = args.module_size or [3]
    specs = [GeneratorSpec(args.family, n=args.n, module_size=s, quotient=args.quotient) for s in sizes]
    report = run_harness(specs, args.trials, args.seed, d_values, r_values, workers=args.workers,
                         timeout=args.timeout, cap=args.oracle_cap)
    if args.output:
        _write(json.dumps(report, indent=1) + "\n", args.output)
    summary = report["summary"]
    if args.json and not args.output:
        print(json.dumps(report))
    else:
        print(f"instances {summary['instances']}  errors {summary['errors']}  fatal {summary['fatal']}")
        for pair, tally in summary["agreement"].items():
            print(f"  {pair:28s} {tally['agree']}/{tally['total']} agree")
        if summary["dp_extended_ms_by_n"]:
            print("  n        dp-extended ms (mean)")
            for n, ms in summary["dp_extended_ms_by_n"].items():
                print(f"  {n:8s} {ms}")
    return 1 if summary["fatal"] else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="drdom", description="Exact (d,r)-domination solvers and reductions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_input(p):
        p.add_argument("--input", "-i", required=True, help="edge-list file")

    p = sub.add_parser("solve", help="minimum (d,r)-dominating set")
    graph_input(p)
    p.add_argument("-d", type=int, default=1)
    p.add_argument("-r", type=int, default=1)
    p.add_argument("--method", choices=SOLVE_METHODS, default="auto")
    p.add_argument("--budget", type=int, help="decision mode: exit 0 if a set of size <= K exists, else 1")
    p.add_argument("--json", action="store_true")
    p.add_argument("--dump-tables", metavar="FILE", help="write DP cost tables as JSON ('-' for stdout)")
    p.add_argument("--oracle-cap", type=int)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("kernel", help="twin-class pruning kernel")
    graph_input(p)
    p.add_argument("-d", type=int, default=1)
    p.add_argument("-r", type=int, default=1)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("compress", help="colored-domination or ILP compression")
    graph_input(p)
    p.add_argument("--target", choices=("colored", "ilp"), required=True)
    p.add_argument("-d", type=int, default=1)
    p.add_argument("-r", type=int, default=1)
    p.add_argument("--budget", type=int)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("power", help="r-th graph power as an edge list")
    graph_input(p)
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("decompose", help="modular decomposition and mw/nd/itp")
    graph_input(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("harness", help="cross-method equivalence runs on generated graphs")
    p.add_argument("--family", choices=FAMILIES, default="gnp")
    p.add_argument("--n", type=int, default=10, help="largest vertex count for small families")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-d", type=int, help="single demand (overrides --dmax)")
    p.add_argument("-r", type=int, help="single radius (overrides --rmax)")
    p.add_argument("--dmax", type=int, default=1)
    p.add_argument("--rmax", type=int, default=1)
    p.add_argument("--quotient", choices=sorted(NAMED_QUOTIENTS), default="p4")
    p.add_argument("--module-size", type=int, nargs="+", help="module sizes for the substituted family")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT, help="seconds per trial")
    p.add_argument("--oracle-cap", type=int)
    p.add_argument("--json", action="store_true")
    p.add_argument("--output", "-o", help="write the full JSON report here")
    p.set_defaults(func=cmd_harness)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
