"""JSON command-line front end.

One JSON document per invocation on standard output.  Exit codes:
0 success, 1 computation error (reported as a JSON error object),
2 usage error (argparse).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .core import CoreGraph, fold
from .gluing import NotAdmissibleError, connector_decompose, glue
from .growth import (
    ConvergenceError,
    critical_exponent,
    cycle_counts,
    kwon_park,
)
from .tower import ConstructionError, construct, verify_certificates
from .words import RankError, WordSyntaxError, parse_word


def _add_graph_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("-d", type=int, metavar="RANK", help="ambient free-group rank")
    sub.add_argument(
        "-w",
        action="append",
        metavar="WORD",
        default=[],
        help="subgroup generator (repeatable)",
    )
    sub.add_argument(
        "--graph",
        metavar="FILE",
        help="graph JSON file, or - for standard input (alternative to -d/-w)",
    )


def _load_graph(args: argparse.Namespace, parser: argparse.ArgumentParser) -> CoreGraph:
    if args.graph is not None:
        if args.w:
            parser.error("give either --graph or -d/-w, not both")
        text = sys.stdin.read() if args.graph == "-" else open(args.graph).read()
        return CoreGraph.from_json_dict(json.loads(text))
    if args.d is None or not args.w:
        parser.error("need -d and at least one -w (or --graph)")
    words = [parse_word(w, args.d) for w in args.w]
    return fold(words, args.d)


def _emit(doc: dict, pretty: bool) -> None:
    if pretty:
        json.dump(doc, sys.stdout, indent=2, sort_keys=False)
    else:
        json.dump(doc, sys.stdout, separators=(",", ":"))
    sys.stdout.write("\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stallings",
        description="Subgroups of free groups as folded core graphs: "
        "growth, exponents, gluing, towers.",
    )
    parser.add_argument("--pretty", action="store_true", help="indent the JSON output")
    subs = parser.add_subparsers(dest="cmd", required=True)

    p = subs.add_parser("fold", help="fold generators into a core graph")
    _add_graph_flags(p)

    p = subs.add_parser("delta", help="critical exponent by two methods")
    _add_graph_flags(p)
    p.add_argument("--rmax", type=int, default=60, help="count depth for the slope method")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument(
        "--flag-confined",
        action="store_true",
        help="also report whether delta < ln(2d-1)/2",
    )

    p = subs.add_parser("count", help="exact element counts by length")
    _add_graph_flags(p)
    p.add_argument("--rmax", type=int, default=30)

    p = subs.add_parser("connector", help="decompose a connector word against the core")
    _add_graph_flags(p)
    p.add_argument("-g", required=True, metavar="WORD", help="connector word")

    p = subs.add_parser("glue", help="glue the core to a conjugate copy of itself")
    _add_graph_flags(p)
    p.add_argument("-g", required=True, metavar="WORD", help="connector word")

    p = subs.add_parser("construct", help="run the staged tower construction")
    _add_graph_flags(p)
    p.add_argument("--eps", type=float, required=True, help="total exponent budget")
    p.add_argument("--stages", type=int, required=True)
    p.add_argument("--radius", type=int, default=0, help="protected neighborhood radius")
    p.add_argument("--tol", type=float, default=1e-10)

    p = subs.add_parser("certify", help="re-run a construction and verify its certificates")
    _add_graph_flags(p)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--stages", type=int, required=True)
    p.add_argument("--radius", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)

    p = subs.add_parser("kwonpark", help="root and exponent of the polynomial family")
    p.add_argument("-n", type=int, required=True)

    return parser


def _cmd_fold(args, parser) -> dict:
    return _load_graph(args, parser).to_json_dict()


def _cmd_delta(args, parser) -> dict:
    graph = _load_graph(args, parser)
    est = critical_exponent(graph, tol=args.tol, dp_rmax=args.rmax)
    doc = {
        "delta": est.delta,
        "delta_dp": est.delta_dp,
        "method_agreement": est.method_agreement,
        "lambda": est.lambda_,
        "cyclic": est.cyclic,
        "coornaert_k": est.coornaert_k,
    }
    if args.flag_confined:
        doc["confined"] = est.delta < math.log(2 * graph.rank - 1) / 2
    return doc


def _cmd_count(args, parser) -> dict:
    graph = _load_graph(args, parser)
    counts = cycle_counts(graph, args.rmax)
    return {"rmax": args.rmax, "counts": [str(c) for c in counts]}


def _cmd_connector(args, parser) -> dict:
    graph = _load_graph(args, parser)
    g = parse_word(args.g, graph.rank)
    dec = connector_decompose(graph, graph, g)
    return {
        "j1": dec.j1,
        "j": dec.j,
        "j2": dec.j2,
        "u1": dec.u1,
        "u2": dec.u2,
        "join_word": str(dec.join_word),
    }


def _cmd_glue(args, parser) -> dict:
    graph = _load_graph(args, parser)
    g = parse_word(args.g, graph.rank)
    return glue(graph, graph, g).to_json_dict()


def _cmd_construct(args, parser) -> dict:
    graph = _load_graph(args, parser)
    state = construct(
        graph, args.eps, args.stages, neighborhood_radius=args.radius, tol=args.tol
    )
    return state.to_json_dict()


def _cmd_certify(args, parser) -> dict:
    graph = _load_graph(args, parser)
    state = construct(
        graph, args.eps, args.stages, neighborhood_radius=args.radius, tol=args.tol
    )
    report = verify_certificates(state)
    return {
        "all_passed": report["all_passed"],
        "records": report["records"],
        "delta_initial": state.delta0,
        "delta_final": state.delta,
        "final_rank": state.gamma.free_rank,
    }


def _cmd_kwonpark(args, parser) -> dict:
    res = kwon_park(args.n)
    return {"n": res.n, "root": res.root, "delta": res.delta}


_DISPATCH = {
    "fold": _cmd_fold,
    "delta": _cmd_delta,
    "count": _cmd_count,
    "connector": _cmd_connector,
    "glue": _cmd_glue,
    "construct": _cmd_construct,
    "certify": _cmd_certify,
    "kwonpark": _cmd_kwonpark,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc = _DISPATCH[args.cmd](args, parser)
    except NotAdmissibleError as exc:
        _emit(
            {
                "error": "not_admissible",
                "message": str(exc),
                "j1": exc.j1,
                "j2": exc.j2,
            },
            args.pretty,
        )
        return 1
    except ConvergenceError as exc:
        residual = exc.residual if math.isfinite(exc.residual) else None
        _emit(
            {"error": "no_convergence", "message": str(exc), "residual": residual},
            args.pretty,
        )
        return 1
    except ConstructionError as exc:
        _emit({"error": "construction_failed", "message": str(exc)}, args.pretty)
        return 1
    except (WordSyntaxError, RankError) as exc:
        _emit({"error": "bad_word", "message": str(exc)}, args.pretty)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        _emit({"error": "bad_input", "message": str(exc)}, args.pretty)
        return 1
    _emit(doc, args.pretty)
    return 0


if __name__ == "__main__":
    sys.exit(main())
