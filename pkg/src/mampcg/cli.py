"""Command-line front end.

Exit codes are stable for scripting: 0 success or affirmative verdict,
1 negative verdict (not separated, not equivalent, violations found),
2 parse or usage error, 3 graph invalid for the requested family.
"""
from __future__ import annotations

import argparse
import json
import sys

from .equivalence import (
    markov_equivalent,
    maximal_sets,
    triplex_class,
    triplexes,
)
from .errors import FamilyError, GraphError, GuardError, ParseError, QueryError
from .gaussian import (
    CiThresholds,
    SemConfig,
    joint_covariance,
    partial_correlation,
    sample_parameters,
)
from .graphoid import check_properties, closure, pairwise_base
from .graphs import validate
from .separation import enumerate_model, separated
from .statements import EMPTY_DETERMINATION, IndependenceStatement
from .textio import parse_graph_file, to_dot, to_text
from .transforms import eampify, emampify, latent_lift, marginalize, selectionize

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INVALID = 3

_CRITERION_FLAG = {
    "mamp": "mamp",
    "mamp-simple": "mamp-simple",
    "amp": "amp",
    "mvr": "mvr",
    "lwf": "lwf",
    "dag": "dag",
}

_AUDIT_RULE_SETS = {
    "all": ("symmetry", "decomposition", "weak-union", "contraction",
            "intersection", "composition", "weak-transitivity"),
    "graphoid": ("symmetry", "decomposition", "weak-union", "contraction",
                 "intersection"),
    "composition": ("composition",),
    "wt": ("weak-transitivity",),
}


def _nodes_flag(value):
    if value is None or value == "":
        return ()
    return tuple(part for part in value.split(",") if part)


def _load(path, use_det):
    _, graph, det = parse_graph_file(path)
    return graph, (det if use_det else EMPTY_DETERMINATION)


def _emit(payload, text_lines, fmt, out):
    if fmt == "json":
        out.write(json.dumps(payload, indent=None, separators=(",", ":"),
                             sort_keys=False) + "\n")
    else:
        for line in text_lines:
            out.write(line + "\n")


def _statement_payload(s):
    return {"x": sorted(s.x), "y": sorted(s.y), "z": sorted(s.z)}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mampcg",
        description="mixed chain graph toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--format", choices=("text", "json"), default="text")
        return p

    p = add("validate", help="check a graph against a family")
    p.add_argument("file")
    p.add_argument("--family", choices=("mamp", "amp", "mvr", "lwf", "dag"),
                   default="mamp")

    p = add("sep", help="separation query")
    p.add_argument("file")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--z", default="")
    p.add_argument("--criterion", choices=tuple(_CRITERION_FLAG), default="mamp")
    p.add_argument("--det-from-transform", action="store_true",
                   help="use the file's det directives in the query")
    p.add_argument("--route-oracle-len", type=int, default=None)

    p = add("model", help="enumerate the independence model")
    p.add_argument("file")
    p.add_argument("--criterion", choices=tuple(_CRITERION_FLAG), default="mamp")
    p.add_argument("--universe", default=None,
                   help="comma list; defaults to all nodes")
    p.add_argument("--condition", default="",
                   help="extra conditioning applied to every query")
    p.add_argument("--det-from-transform", action="store_true")
    p.add_argument("--max-universe", type=int, default=8)

    p = add("base", help="pairwise separation base")
    p.add_argument("file")

    p = add("closure", help="compositional graphoid closure of the base")
    p.add_argument("file")
    p.add_argument("--emit-model", action="store_true")

    p = add("audit", help="audit the graph's model against the rules")
    p.add_argument("file")
    p.add_argument("--rules", choices=tuple(_AUDIT_RULE_SETS), default="all")

    p = add("triplex", help="list triplexes")
    p.add_argument("file")

    p = add("equiv", help="Markov equivalence of two graphs")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--oracle", action="store_true",
                   help="compare enumerated models instead of triplexes")

    p = add("class", help="triplex equivalence class of the graph")
    p.add_argument("file")
    p.add_argument("--family", choices=("mamp", "amp", "mvr"), default="mamp")
    p.add_argument("--emit-members", action="store_true")

    p = add("maximal", help="maximal directed/bidirected members of the class")
    p.add_argument("file")
    p.add_argument("--family", choices=("mamp", "amp", "mvr"), default="mamp")

    p = add("transform", help="error, selection and latent transforms")
    p.add_argument("file")
    p.add_argument("--kind", choices=("eamp", "emamp", "selection", "latent"),
                   required=True)

    p = add("marginalize", help="marginalize nodes out of an error graph")
    p.add_argument("file")
    p.add_argument("--nodes", required=True)

    p = add("gaussian", help="numeric audit of one sampled system")
    p.add_argument("file")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--report", choices=("text", "json"), default=None,
                   help="alias of --format")
    p.add_argument("--zero-tol", type=float, default=CiThresholds.zero_tol)
    p.add_argument("--nonzero-floor", type=float,
                   default=CiThresholds.nonzero_floor)

    p = add("dot", help="DOT export")
    p.add_argument("file")

    return parser


def _error_graph_from_file(path):
    doc, graph, det = parse_graph_file(path)
    origin = tuple(
        (e, e[len("eps_"):]) for e in sorted(graph.error_nodes)
        if e.startswith("eps_") and e[len("eps_"):] in graph.nodes)
    from .transforms import ErrorGraph

    return ErrorGraph(graph, det, origin, (f"file:{path}",))


def _cmd_validate(args, out):
    _, graph, _ = parse_graph_file(args.file)
    report = validate(graph, args.family)
    payload = {
        "family": args.family,
        "valid": report.ok,
        "violations": [
            {"constraint": v.constraint, "witness": list(v.witness)}
            for v in report.violations
        ],
    }
    _emit(payload, str(report).splitlines(), args.format, out)
    return EXIT_OK if report.ok else EXIT_INVALID


def _cmd_sep(args, out):
    graph, det = _load(args.file, args.det_from_transform)
    x = _nodes_flag(args.x)
    y = _nodes_flag(args.y)
    z = _nodes_flag(args.z)
    verdict = separated(graph, x, y, z, criterion=args.criterion, det=det)
    word = "separated" if verdict else "not separated"
    payload = {"verdict": word, "x": sorted(x), "y": sorted(y),
               "z": sorted(z), "criterion": args.criterion}
    _emit(payload, [word], args.format, out)
    return EXIT_OK if verdict else EXIT_NEGATIVE


def _cmd_model(args, out):
    graph, det = _load(args.file, args.det_from_transform)
    universe = _nodes_flag(args.universe) if args.universe else None
    model = enumerate_model(
        graph, args.criterion, det=det, universe=universe,
        condition_on=_nodes_flag(args.condition),
        max_universe=args.max_universe)
    if args.format == "json":
        out.write(model.to_json())
    else:
        for s in model.sorted_statements():
            out.write(str(s) + "\n")
    return EXIT_OK


def _cmd_base(args, out):
    _, graph, _ = parse_graph_file(args.file)
    stmts = sorted(pairwise_base(graph), key=lambda s: s.sort_key)
    payload = {"statements": [_statement_payload(s) for s in stmts]}
    _emit(payload, [str(s) for s in stmts], args.format, out)
    return EXIT_OK


def _cmd_closure(args, out):
    _, graph, _ = parse_graph_file(args.file)
    base = pairwise_base(graph)
    result = closure(base, graph.nodes)
    stmts = result.model.sorted_statements()
    payload = {
        "base_size": len(base),
        "closure_size": len(stmts),
        "iterations": result.iterations,
    }
    lines = [f"base {len(base)} statements, closure {len(stmts)}, "
             f"{result.iterations} iterations"]
    if args.emit_model:
        payload["statements"] = [_statement_payload(s) for s in stmts]
        lines = [str(s) for s in stmts]
    _emit(payload, lines, args.format, out)
    return EXIT_OK


def _cmd_audit(args, out):
    _, graph, _ = parse_graph_file(args.file)
    model = enumerate_model(graph, "mamp")
    violations = check_properties(model, _AUDIT_RULE_SETS[args.rules])
    payload = {
        "rules": list(_AUDIT_RULE_SETS[args.rules]),
        "violations": [str(v) for v in violations],
    }
    lines = ([f"no violations ({args.rules})"] if not violations
             else [str(v) for v in violations])
    _emit(payload, lines, args.format, out)
    return EXIT_OK if not violations else EXIT_NEGATIVE


def _cmd_triplex(args, out):
    _, graph, _ = parse_graph_file(args.file)
    found = sorted(triplexes(graph), key=lambda t: t.sort_key)
    payload = {"triplexes": [
        {"endpoints": sorted(t.endpoints), "center": t.center}
        for t in found]}
    _emit(payload, [str(t) for t in found], args.format, out)
    return EXIT_OK


def _cmd_equiv(args, out):
    _, g, _ = parse_graph_file(args.file1)
    _, h, _ = parse_graph_file(args.file2)
    mode = "oracle" if args.oracle else "triplex"
    verdict = markov_equivalent(g, h, mode)
    word = "equivalent" if verdict else "not equivalent"
    _emit({"verdict": word, "mode": mode}, [word], args.format, out)
    return EXIT_OK if verdict else EXIT_NEGATIVE


def _cmd_class(args, out):
    _, graph, _ = parse_graph_file(args.file)
    cls = triplex_class(graph, args.family)
    payload = {"family": args.family, "size": len(cls)}
    lines = [f"{len(cls)} members"]
    if args.emit_members:
        rendered = [to_text(member) for member in cls.members]
        payload["members"] = rendered
        lines = []
        for i, text in enumerate(rendered):
            if i:
                lines.append("---")
            lines.extend(text.rstrip("\n").splitlines())
    _emit(payload, lines, args.format, out)
    return EXIT_OK


def _cmd_maximal(args, out):
    _, graph, _ = parse_graph_file(args.file)
    cls = triplex_class(graph, args.family)
    result = maximal_sets(cls.members)
    payload = {
        "directed_pairs": sorted(sorted(p) for p in result.directed_pairs),
        "mdcg_count": len(result.mdcgs),
        "bidirected_edges": sorted(sorted(p) for p in result.bidirected_edges),
        "mbmdcg_count": len(result.mbmdcgs),
    }
    lines = [
        "directed pairs: "
        + (", ".join("-".join(sorted(p))
                     for p in sorted(result.directed_pairs,
                                     key=lambda q: sorted(q))) or "(none)"),
        f"mdcgs: {len(result.mdcgs)}",
        "bidirected edges: "
        + (", ".join("-".join(sorted(p))
                     for p in sorted(result.bidirected_edges,
                                     key=lambda q: sorted(q))) or "(none)"),
        f"mbmdcgs: {len(result.mbmdcgs)}",
    ]
    _emit(payload, lines, args.format, out)
    return EXIT_OK


def _cmd_transform(args, out):
    if args.kind == "selection":
        eg = selectionize(_error_graph_from_file(args.file))
        out.write(to_text(eg.graph, eg.det,
                          comments=[f"transform: {p}" for p in eg.provenance]))
        return EXIT_OK
    _, graph, _ = parse_graph_file(args.file)
    if args.kind == "latent":
        lifted, latents = latent_lift(graph)
        out.write(to_text(lifted,
                          comments=["transform: latent",
                                    f"latent nodes: {','.join(sorted(latents))}"]))
        return EXIT_OK
    eg = eampify(graph) if args.kind == "eamp" else emampify(graph)
    out.write(to_text(eg.graph, eg.det,
                      comments=[f"transform: {p}" for p in eg.provenance]))
    return EXIT_OK


def _cmd_marginalize(args, out):
    eg = marginalize(_error_graph_from_file(args.file),
                     _nodes_flag(args.nodes))
    out.write(to_text(eg.graph, eg.det,
                      comments=[f"transform: {p}" for p in eg.provenance]))
    return EXIT_OK


def _cmd_gaussian(args, out):
    _, graph, _ = parse_graph_file(args.file)
    thresholds = CiThresholds(zero_tol=args.zero_tol,
                              nonzero_floor=args.nonzero_floor)
    cov = joint_covariance(sample_parameters(graph, args.seed, SemConfig()))
    records = []
    nodes = graph.node_list
    from itertools import combinations

    failures = 0
    for a, b in combinations(nodes, 2):
        rest = [v for v in nodes if v not in (a, b)]
        for zmask in range(1 << len(rest)):
            z = tuple(rest[i] for i in range(len(rest)) if zmask >> i & 1)
            sep = separated(graph, a, b, z)
            rho = partial_correlation(cov, a, b, z)
            if sep and abs(rho) >= thresholds.zero_tol:
                failures += 1
            records.append({
                "x": [a], "y": [b], "z": sorted(z),
                "separated": sep, "rho": rho, "seed": args.seed,
            })
    payload = {"seed": args.seed, "records": records,
               "markov_failures": failures}
    fmt = args.report or args.format
    lines = [
        f"{r['x'][0]} _||_ {r['y'][0]} | "
        f"{','.join(r['z']) if r['z'] else '{}'}  "
        f"{'sep' if r['separated'] else 'dep'}  rho={r['rho']:+.3e}"
        for r in records
    ]
    lines.append(f"markov failures: {failures}")
    _emit(payload, lines, fmt, out)
    return EXIT_OK if failures == 0 else EXIT_NEGATIVE


def _cmd_dot(args, out):
    doc, graph, _ = parse_graph_file(args.file)
    out.write(to_dot(graph, doc.name or "G"))
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "sep": _cmd_sep,
    "model": _cmd_model,
    "base": _cmd_base,
    "closure": _cmd_closure,
    "audit": _cmd_audit,
    "triplex": _cmd_triplex,
    "equiv": _cmd_equiv,
    "class": _cmd_class,
    "maximal": _cmd_maximal,
    "transform": _cmd_transform,
    "marginalize": _cmd_marginalize,
    "gaussian": _cmd_gaussian,
    "dot": _cmd_dot,
}


def main(argv=None, out=None, err=None):
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return _COMMANDS[args.command](args, out)
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_USAGE
    except FamilyError as exc:
        err.write(f"invalid graph: {exc}\n")
        for violation in exc.report.violations:
            err.write(f"  {violation}\n")
        return EXIT_INVALID
    except FileNotFoundError as exc:
        err.write(f"cannot read file: {exc}\n")
        return EXIT_USAGE
    except (GraphError, QueryError, GuardError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
