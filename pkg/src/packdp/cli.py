"""Command-line entry point.

Output is JSON on stdout; ``--human`` renders it as text instead.
Exit codes: 0 ok, 2 the answer to a decision query is false, 3 input error,
4 oracle budget exceeded. Errors are printed as {"error": ..., "message": ...}.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .clique_dp import CliqueDPError, solve_clique_packing, solve_clique_partition
from .gadgets import GadgetError, build, dumps_gadget, gadget_from_dict
from .graph import Graph, GraphError, emit_gr, named_pattern, parse_gr
from .hpack_dp import HDPError, solve_h_packing, solve_h_partition
from .oracle import (Budget, BudgetExceeded, exact_cover_feasible, max_packing_bruteforce,
                     realized_relation, verify_gadget)
from .reductions import (ReductionError, csp_from_dict, make_permiset, reduce_csp_to_multiclique,
                         reduce_multi_to_single, reduce_permiset_to_hpartition)
from .relations import RelationError, relation_from_dict
from .treedec import TDError, emit_td, heuristic_treedec, nicify, parse_td, validate

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_BUDGET = 0, 2, 3, 4
MAX_PATTERN = 10  # patterns are limited to 10 vertices

INPUT_ERRORS = (GraphError, TDError, GadgetError, RelationError, ReductionError, CliqueDPError, HDPError,
                ValueError, KeyError, OSError, json.JSONDecodeError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would read as "false"
    def error(self, message):
        raise UsageError(message)


# -- input helpers ---------------------------------------------------------------

def read_graph(path: str) -> Graph:
    return parse_gr(Path(path).read_text())


def read_pattern(spec: str) -> Graph:
    """A pattern name (K3, P4, C4, paw) or a .gr file."""
    h = read_graph(spec) if Path(spec).is_file() else named_pattern(spec)
    if h.n > MAX_PATTERN:
        raise GraphError(f"pattern has {h.n} vertices; at most {MAX_PATTERN} are supported")
    return h


def read_json(path: str):
    return json.loads(Path(path).read_text())


def checked_td(g: Graph, td_path: str | None, strategy: str = "min-fill"):
    """The given decomposition, validated, or a heuristic one."""
    td = parse_td(Path(td_path).read_text()) if td_path else heuristic_treedec(g, strategy)
    bad = validate(td, g)
    if bad:
        raise TDError(f"invalid decomposition: {bad.kind}: {bad.detail}")
    return td


def budget_of(args) -> Budget:
    return Budget(args.budget) if getattr(args, "budget", None) else Budget()


def write_outputs(prefix: str, out) -> dict:
    base = Path(prefix)
    base.parent.mkdir(parents=True, exist_ok=True)
    paths = {"graph": str(base.with_suffix(".gr")), "td": str(base.with_suffix(".td")),
             "certificate": str(base.with_suffix(".cert.json"))}
    Path(paths["graph"]).write_text(emit_gr(out.graph))
    Path(paths["td"]).write_text(emit_td(out.decomposition))
    Path(paths["certificate"]).write_text(json.dumps(out.certificate, sort_keys=True) + "\n")
    return paths


# -- commands ---------------------------------------------------------------------

def cmd_solve(args) -> tuple[dict, int]:
    g = read_graph(args.graph)
    ntd = nicify(checked_td(g, args.td))
    if args.problem == "clique-pack":
        res = solve_clique_packing(g, ntd, args.c, args.d, args.variant, join_mode=args.join_mode,
                                   witness=args.witness)
        out = {"value": res.value}
        if args.witness:
            out["witness"] = [[[v + 1 for v in vs], m] for vs, m in res.witness]
        return out, EXIT_OK
    if args.problem == "clique-part":
        ok = solve_clique_partition(g, ntd, args.c, args.d, args.variant, fast=True)
        return {"feasible": ok}, EXIT_OK if ok else EXIT_FALSE
    h = read_pattern(args.pattern)
    if args.problem == "h-pack":
        res = solve_h_packing(g, ntd, h, witness=args.witness)
        out = {"value": res.value}
        if args.witness:
            out["completions"] = res.completions
        return out, EXIT_OK
    ok = solve_h_partition(g, ntd, h)
    return {"feasible": ok}, EXIT_OK if ok else EXIT_FALSE


def cmd_oracle(args) -> tuple[dict, int]:
    budget = budget_of(args)
    if args.query == "relation":
        gd = gadget_from_dict(read_json(args.input))
        r = realized_relation(gd, args.variant, budget)
        return {"relation": r.to_dict(), "states": budget.used}, EXIT_OK
    g = read_graph(args.input)
    h = read_pattern(args.pattern)
    if args.query == "pack":
        val, wit = max_packing_bruteforce(g, h, args.c, args.variant, budget)
        return {"value": val, "witness": [[[v + 1 for v in vs], m] for vs, m in wit]}, EXIT_OK
    if args.demand:
        raw = read_json(args.demand)
        demand = [int(raw[str(v + 1)]) if isinstance(raw, dict) else int(raw[v]) for v in range(g.n)]
    else:
        demand = [args.c] * g.n
    ok, wit = exact_cover_feasible(g, h, demand, args.variant, budget, c=max(args.c, max(demand, default=0)))
    out = {"feasible": ok}
    if ok:
        out["witness"] = [[[v + 1 for v in vs], m] for vs, m in wit]
    return out, EXIT_OK if ok else EXIT_FALSE


def cmd_gadget(args) -> tuple[dict, int]:
    if args.action == "verify":
        gd = gadget_from_dict(read_json(args.file))
        rep = verify_gadget(gd, budget_of(args))
        return rep.to_dict(), EXIT_OK if rep.ok else EXIT_FALSE
    kw = {"c": args.c, "d": args.d, "k": args.k, "pattern": args.pattern}
    if args.relation:
        kw["relation"] = relation_from_dict(read_json(args.relation))
    gd = build(args.kind, **kw)
    text = dumps_gadget(gd)
    if args.output:
        Path(args.output).write_text(text + "\n")
        return {"written": args.output, "vertices": gd.graph.n, "portals": len(gd.portals)}, EXIT_OK
    return json.loads(text), EXIT_OK


def cmd_reduce(args) -> tuple[dict, int]:
    if args.source == "csp":
        out = reduce_csp_to_multiclique(csp_from_dict(read_json(args.input)), args.c, args.d, ell=args.ell)
    elif args.source == "single":
        g = read_graph(args.input)
        out = reduce_multi_to_single(g, args.c, args.d, checked_td(g, args.td))
    else:
        raw = read_json(args.input)
        inst = make_permiset(int(raw["k"]), [tuple(map(tuple, e)) for e in raw["edges"]])
        out = reduce_permiset_to_hpartition(inst, read_pattern(args.pattern))
    res = {"status": out.status, "vertices": out.graph.n, "width": out.width}
    if out.status != "ok":
        res["certificate"] = out.certificate
        return res, EXIT_FALSE
    res["files"] = write_outputs(args.output, out)
    return res, EXIT_OK


def cmd_td(args) -> tuple[dict, int]:
    g = read_graph(args.graph)
    if args.action == "heuristic":
        td = heuristic_treedec(g, args.strategy)
        if args.output:
            Path(args.output).write_text(emit_td(td))
        return {"width": td.width, "bags": len(td.bags), "td": emit_td(td)}, EXIT_OK
    td = parse_td(Path(args.td).read_text())
    bad = validate(td, g)
    if bad:
        return {"valid": False, "violation": bad.to_dict()}, EXIT_FALSE
    return {"valid": True, "width": td.width}, EXIT_OK


def cmd_batch(args) -> tuple[dict, int]:
    from .report import write_report
    from .suites import SUITES, run_suite
    if args.suite not in SUITES:
        raise KeyError(f"unknown suite {args.suite!r}; known: {', '.join(SUITES)}")
    rep = run_suite(args.suite, args.seed)
    out = rep.to_dict()
    if args.out:
        out["files"] = write_report(rep, Path(args.out))
    out["total_s"] = round(sum(rep.timings), 3)
    return out, EXIT_OK if rep.passed else EXIT_FALSE


# -- parser -----------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, pattern: bool = False) -> None:
    p.add_argument("--c", type=int, default=1)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--variant", choices=("dist", "arb"), default="dist")
    if pattern:
        p.add_argument("--pattern", default="K3", help="name (K3, P3, C4, paw) or .gr file")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="packdp", description="Packing and partition solvers over tree decompositions.")
    ap.add_argument("--human", action="store_true", help="text output instead of JSON")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="tree-decomposition DP solvers")
    p.add_argument("problem", choices=("clique-pack", "clique-part", "h-pack", "h-part"))
    p.add_argument("graph")
    p.add_argument("--td")
    p.add_argument("--join-mode", choices=("naive", "convolution"), default="naive")
    p.add_argument("--witness", action="store_true")
    _common(p, pattern=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exhaustive reference solvers")
    p.add_argument("query", choices=("pack", "cover", "relation"))
    p.add_argument("input", help=".gr graph, or gadget JSON for relation")
    p.add_argument("--demand", help="JSON list or {vertex: count} map, 1-indexed keys")
    p.add_argument("--budget", type=int)
    _common(p, pattern=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gadget", help="build or verify gadgets")
    p.add_argument("action", choices=("build", "verify"))
    p.add_argument("file", nargs="?", help="gadget JSON (verify)")
    p.add_argument("--kind", default="neq")
    p.add_argument("--c", type=int, default=1)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--pattern")
    p.add_argument("--relation", help="relation JSON {arity, bound, tuples}")
    p.add_argument("--budget", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("reduce", help="emit reduced instances as .gr + .td + certificate")
    p.add_argument("source", choices=("csp", "single", "permiset"))
    p.add_argument("input")
    p.add_argument("--td")
    p.add_argument("--ell", type=int)
    p.add_argument("-o", "--output", default="reduced")
    _common(p, pattern=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("td", help="tree decomposition tools")
    p.add_argument("action", choices=("validate", "heuristic"))
    p.add_argument("graph")
    p.add_argument("td", nargs="?")
    p.add_argument("--strategy", choices=("min-degree", "min-fill"), default="min-fill")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_td)

    p = sub.add_parser("batch", help="run a named acceptance suite")
    p.add_argument("suite")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out", help="directory for JSON, CSV and figures")
    p.set_defaults(func=cmd_batch)
    return ap


def render_human(out: dict) -> str:
    if "suite" in out and "criteria" in out:
        lines = [f"suite {out['suite']} seed={out['seed']}: {'PASS' if out['passed'] else 'FAIL'}"]
        lines += [f"  [{'pass' if c['passed'] else 'FAIL'}] {c['name']}: {c['detail']}" for c in out["criteria"]]
        return "\n".join(lines)
    return "\n".join(f"{k}: {v}" for k, v in out.items() if k != "td") + ("\n" + out["td"] if "td" in out else "")


def main(argv: list[str] | None = None) -> int:
    human = False
    try:
        args = build_parser().parse_args(argv)
        human = args.human
        if args.command == "gadget" and args.action == "verify" and not args.file:
            raise UsageError("gadget verify needs a file")
        if args.command == "td" and args.action == "validate" and not args.td:
            raise UsageError("td validate needs a .td file")
        out, code = args.func(args)
    except UsageError as exc:
        out, code = {"error": "usage", "message": str(exc)}, EXIT_INPUT
    except BudgetExceeded as exc:
        out, code = {"error": "budget", "message": str(exc)}, EXIT_BUDGET
    except INPUT_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        out, code = {"error": type(exc).__name__, "message": str(msg)}, EXIT_INPUT
    print(render_human(out) if human else json.dumps(out, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
