"""Batch command-line interface.

Subcommands: density, cliques, components, peel, colour, verify,
force-check, witness-j, census, gnp, scan.  Exit codes: 0 ok, 1 domain
error (density violation, guard, bad input), 2 usage error, 3 internal
proof-invariant violation (a finding).

Every subcommand is pure given (argv, stdin, seed): no wall-clock defaults,
byte-identical output on repeated runs.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import graph as graphmod
from .colouring import Colouring, colour_graph
from .density import max_2_density, max_density
from .errors import DomainError, ProofInvariantError
from .experiments import ScanRow, dense_subgraph_census, gnp, threshold_scan
from .graph import Graph, to_edge_list, to_json_dict
from .k4 import colour_graph_k4, peel_trace_k4, witness_j
from .oracle import (
    DEFAULT_EDGE_GUARD,
    DEFAULT_TIME_BUDGET,
    brute_force_no_rainbow_colouring,
    complete_colouring,
    find_rainbow_clique,
    forced_rainbow,
)
from .structure import kk_components, peel_trace


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _load_graph(args) -> Graph:
    if args.input is None:
        raise DomainError("--input FILE|- is required for this subcommand")
    return graphmod.loads(_read_input(args.input))


def _emit(payload, args) -> None:
    if getattr(args, "format", "json") == "text":
        if isinstance(payload, str):
            print(payload)
        else:
            print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(json.dumps(payload, sort_keys=True))


def cmd_density(args) -> int:
    g = _load_graph(args)
    m = max_density(g)
    out = {"m": f"{m.numerator}/{m.denominator}"}
    if g.n >= 3:
        m2 = max_2_density(g)
        out["m2"] = f"{m2.numerator}/{m2.denominator}"
    _emit(out, args)
    return 0


def cmd_cliques(args) -> int:
    g = _load_graph(args)
    _emit({"k": args.k, "cliques": [list(c) for c in g.cliques(args.k)]}, args)
    return 0


def cmd_components(args) -> int:
    g = _load_graph(args)
    comps = kk_components(g, args.k)
    _emit(
        {
            "k": args.k,
            "components": [
                {"vertices": list(c.labels), "graph": to_json_dict(c)} for c in comps
            ],
        },
        args,
    )
    return 0


def cmd_peel(args) -> int:
    g = _load_graph(args)
    if args.k == 4:
        trace = peel_trace_k4(g)
    else:
        trace = peel_trace(g, args.k)
    print(trace.to_json())
    return 0


def cmd_colour(args) -> int:
    g = _load_graph(args)
    if args.k == 4:
        colouring, ledgers = colour_graph_k4(g)
        payload = {
            "k": 4,
            "colouring": json.loads(colouring.to_json()),
            "ledgers": [json.loads(l.to_json()) for l in ledgers],
        }
    else:
        colouring, reports = colour_graph(g, args.k)
        payload = {
            "k": args.k,
            "colouring": json.loads(colouring.to_json()),
            "reports": [json.loads(r.to_json()) for r in reports],
        }
    _emit(payload, args)
    return 0


def cmd_verify(args) -> int:
    g = _load_graph(args)
    colouring = Colouring.from_json(_read_input(args.colouring))
    total = complete_colouring(g, colouring)
    witness = find_rainbow_clique(g, colouring, args.k)
    payload = {
        "k": args.k,
        "proper": True,
        "rainbow": witness is not None,
        "witness": json.loads(witness.to_json()) if witness else None,
        "coloursUsed": len(set(total.assignment.values())),
    }
    _emit(payload, args)
    return 0 if witness is None else 1


def cmd_force_check(args) -> int:
    g = _load_graph(args)
    forced = forced_rainbow(g, args.k, edge_guard=args.guard_edges, time_budget=args.time_budget)
    payload = {"k": args.k, "forced": forced}
    if args.certificate and not forced:
        cert = brute_force_no_rainbow_colouring(
            g, args.k, edge_guard=args.guard_edges, time_budget=args.time_budget
        )
        payload["colouring"] = json.loads(cert.to_json())
    _emit(payload, args)
    return 0


def cmd_witness_j(args) -> int:
    print(to_edge_list(witness_j()), end="")
    return 0


def cmd_census(args) -> int:
    g = _load_graph(args)
    threshold = Fraction(args.threshold)
    sets = dense_subgraph_census(g, args.vmax, threshold)
    _emit(
        {
            "vmax": args.vmax,
            "threshold": f"{threshold.numerator}/{threshold.denominator}",
            "sets": [list(s) for s in sets],
        },
        args,
    )
    return 0


def cmd_gnp(args) -> int:
    if args.seed is None:
        raise DomainError("--seed is required (no wall-clock default)")
    g = gnp(args.n, args.p, args.seed)
    if args.format == "json":
        _emit(to_json_dict(g), args)
    else:
        print(to_edge_list(g), end="")
    return 0


def cmd_scan(args) -> int:
    if args.seed is None:
        raise DomainError("--seed is required (no wall-clock default)")
    exponents = [float(x) for x in args.exponents.split(",") if x.strip()]
    rows = threshold_scan(
        args.k,
        args.n,
        exponents,
        trials=args.trials,
        seed=args.seed,
        census_nmax=args.census_nmax,
    )
    if args.format == "csv":
        print(ScanRow.CSV_HEADER)
        for r in rows:
            print(r.to_csv())
    else:
        _emit([r.to_json_dict() for r in rows], args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="antirainbow",
        description="Constructive anti-Ramsey colourings with exact structural ledgers",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_k=True):
        p.add_argument("--input", help="edge-list or JSON graph file, or - for stdin")
        p.add_argument("--format", choices=["json", "csv", "text"], default="json")
        if needs_k:
            p.add_argument("--k", type=int, default=5, help="clique order (default 5)")

    p = sub.add_parser("density", help="exact m(G) and m^(2)(G)")
    common(p, needs_k=False)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("cliques", help="all k-cliques in canonical order")
    common(p)
    p.set_defaults(func=cmd_cliques)

    p = sub.add_parser("components", help="K_k-components")
    common(p)
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("peel", help="peel trace with the exact ledger")
    common(p)
    p.set_defaults(func=cmd_peel)

    p = sub.add_parser("colour", help="anti-rainbow colouring (k=4 routed to the K_4 engine)")
    common(p)
    p.set_defaults(func=cmd_colour)

    p = sub.add_parser("verify", help="complete the colouring and hunt for a rainbow K_k")
    common(p)
    p.add_argument("--colouring", required=True, help="colouring JSON file, or -")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("force-check", help="exhaustive: does every proper colouring force a rainbow K_k?")
    common(p)
    p.add_argument("--guard-edges", type=int, default=DEFAULT_EDGE_GUARD)
    p.add_argument("--time-budget", type=float, default=DEFAULT_TIME_BUDGET)
    p.add_argument("--certificate", action="store_true", help="emit a no-rainbow colouring when not forced")
    p.set_defaults(func=cmd_force_check)

    p = sub.add_parser("witness-j", help="emit the K_{3,4}+triangle witness as an edge list")
    p.set_defaults(func=cmd_witness_j)

    p = sub.add_parser("census", help="all dense vertex sets up to vmax")
    common(p, needs_k=False)
    p.add_argument("--vmax", type=int, default=12)
    p.add_argument("--threshold", default="15/7", help="rational threshold, e.g. 15/7")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("gnp", help="sample G(n, p) reproducibly")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.set_defaults(func=cmd_gnp)

    p = sub.add_parser("scan", help="threshold scan over p = n^-c")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int)
    p.add_argument("--exponents", default="0.35,0.40,0.45,0.50,0.55,0.60")
    p.add_argument("--census-nmax", type=int, default=40,
                   help="compute the census column only for n up to this bound")
    p.add_argument("--format", choices=["json", "csv"], default="csv")
    p.set_defaults(func=cmd_scan)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except ProofInvariantError as exc:
        print(f"proof-invariant violation: {exc}", file=sys.stderr)
        if exc.context:
            print(json.dumps({"context": repr(exc.context)}), file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
