"""The graph text format and DOT export.

One directive per line; ``#`` starts a comment.  Directives:

    node <name> [error|selection]
    edge <A> -> <B>
    edge <A> -- <B>
    edge <A> <-> <B>
    det <T> <- <S1>,<S2>,...

Nodes referenced by edges or determinations are declared implicitly.  A
second edge directive for an already connected pair is a parse error.  A
document serializes back to the exact directive sequence it was parsed
from, and ``to_text`` produces the normalized sorted form used by the CLI.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import EdgeConflictError, ParseError
from .graphs import EdgeKind, MixedGraph
from .statements import DeterminationMap

_NAME = re.compile(r"^\w+$")
_EDGE_TOKENS = {"--": EdgeKind.UNDIRECTED, "->": EdgeKind.DIRECTED,
                "<->": EdgeKind.BIDIRECTED}
_NAME_COMMENT = re.compile(r"^#\s*graph:\s*(\S+)\s*$")


@dataclass(frozen=True)
class Directive:
    kind: str  # node | edge | det
    args: tuple

    def render(self):
        if self.kind == "node":
            return " ".join(("node",) + self.args)
        if self.kind == "edge":
            return " ".join(("edge",) + self.args)
        target, sources = self.args
        return f"det {target} <- {','.join(sources)}"


@dataclass(frozen=True)
class GraphDocument:
    name: object  # optional str
    directives: tuple

    def to_text(self):
        lines = []
        if self.name is not None:
            lines.append(f"# graph: {self.name}")
        lines.extend(d.render() for d in self.directives)
        return "\n".join(lines) + "\n"


def _check_name(token, lineno):
    if not _NAME.match(token):
        raise ParseError(f"bad node name {token!r}", lineno)
    return token


def parse_graph(text):
    """Parse graph text into (document, graph, determination map)."""
    name = None
    directives = []
    node_tags = {}
    edges = []
    edge_pairs = {}
    det_entries = []
    det_targets = set()
    mentioned = set()
    det_mentions = []  # (node, lineno); checked against declarations at the end

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _NAME_COMMENT.match(line)
            if m and name is None:
                name = m.group(1)
            continue
        parts = line.split()
        head = parts[0]
        if head == "node":
            if len(parts) == 2:
                tag = None
            elif len(parts) == 3 and parts[2] in ("error", "selection"):
                tag = parts[2]
            else:
                raise ParseError(
                    "expected: node <name> [error|selection]", lineno)
            node = _check_name(parts[1], lineno)
            if node in node_tags and node_tags[node] != tag:
                raise ParseError(
                    f"node {node} redeclared with a different tag", lineno)
            node_tags[node] = tag
            directives.append(Directive("node", tuple(parts[1:])))
        elif head == "edge":
            if len(parts) != 4 or parts[2] not in _EDGE_TOKENS:
                raise ParseError(
                    "expected: edge <A> (--|->|<->) <B>", lineno)
            a = _check_name(parts[1], lineno)
            b = _check_name(parts[3], lineno)
            if a == b:
                raise ParseError(f"self loop at {a}", lineno)
            pair = frozenset((a, b))
            if pair in edge_pairs:
                raise ParseError(
                    f"duplicate edge between {min(pair)} and {max(pair)} "
                    f"(first declared on line {edge_pairs[pair]})", lineno)
            edge_pairs[pair] = lineno
            edges.append((a, parts[2], b))
            mentioned.update((a, b))
            directives.append(Directive("edge", (a, parts[2], b)))
        elif head == "det":
            if len(parts) != 4 or parts[2] != "<-":
                raise ParseError(
                    "expected: det <T> <- <S1>,<S2>,...", lineno)
            target = _check_name(parts[1], lineno)
            sources = tuple(
                _check_name(s, lineno) for s in parts[3].split(",") if s)
            if not sources:
                raise ParseError("determination needs at least one source",
                                 lineno)
            if target in sources:
                raise ParseError(f"{target} cannot determine itself", lineno)
            if target in det_targets:
                raise ParseError(
                    f"duplicate determination target {target}", lineno)
            det_targets.add(target)
            det_entries.append((target, sources))
            for node in (target,) + sources:
                det_mentions.append((node, lineno))
            directives.append(Directive("det", (target, sources)))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)

    declared = set(node_tags) | mentioned
    for node, lineno in det_mentions:
        if node not in declared:
            raise ParseError(
                f"determination references undeclared node {node}", lineno)
    try:
        graph = MixedGraph(
            nodes=declared,
            edges=edges,
            error_nodes={n for n, t in node_tags.items() if t == "error"},
            selection_nodes={n for n, t in node_tags.items()
                             if t == "selection"},
        )
    except EdgeConflictError as exc:
        raise ParseError(str(exc)) from exc
    det = DeterminationMap.make(det_entries)
    doc = GraphDocument(name, tuple(directives))
    return doc, graph, det


def parse_graph_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read())


def to_text(graph, det=None, name=None, comments=()):
    """Normalized serialization: tagged or isolated node directives first,
    then edges and determinations, all in sorted order."""
    lines = []
    if name is not None:
        lines.append(f"# graph: {name}")
    lines.extend(f"# {c}" for c in comments)
    covered = set()
    for e in graph.edges():
        covered.update((e.a, e.b))
    for v in graph.node_list:
        tag = ("error" if v in graph.error_nodes
               else "selection" if v in graph.selection_nodes
               else None)
        if tag is not None:
            lines.append(f"node {v} {tag}")
        elif v not in covered:
            lines.append(f"node {v}")
    for e in graph.edges():
        lines.append(f"edge {e.token_str()}")
    if det is not None:
        for target, sources in det:
            lines.append(f"det {target} <- {','.join(sorted(sources))}")
    return "\n".join(lines) + "\n"


_TAG_ATTRS = {
    "error": ' [style=dashed]',
    "selection": ' [shape=box]',
}


def to_dot(graph, name="G"):
    """DOT rendering: undirected edges carry dir=none, bidirected dir=both."""
    lines = [f"digraph {name} {{"]
    for v in graph.node_list:
        attr = ""
        if v in graph.error_nodes:
            attr = _TAG_ATTRS["error"]
        elif v in graph.selection_nodes:
            attr = _TAG_ATTRS["selection"]
        lines.append(f'  "{v}"{attr};')
    for e in graph.edges():
        if e.kind is EdgeKind.DIRECTED:
            lines.append(f'  "{e.a}" -> "{e.b}";')
        elif e.kind is EdgeKind.UNDIRECTED:
            lines.append(f'  "{e.a}" -> "{e.b}" [dir=none];')
        else:
            lines.append(f'  "{e.a}" -> "{e.b}" [dir=both];')
    lines.append("}")
    return "\n".join(lines) + "\n"
