"""Graph surgeries that make error structure explicit.

An error expansion gives every node an explicit error parent and lifts the
symmetric edges onto the error layer; the resulting graph plus its
determination map represents the same separations over the original nodes
once the error layer is marginalized away.  Further surgeries replace
undirected error couplings by selection children, marginalize original
nodes out while preserving the represented model, and replace bidirected
edges by explicit latent parents.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import FamilyError, GraphError, QueryError
from .graphs import Edge, EdgeKind, MixedGraph, validate
from .statements import DeterminationMap

ERROR_PREFIX = "eps_"
SELECTION_PREFIX = "sel_"
LATENT_PREFIX = "lat_"


@dataclass(frozen=True)
class ErrorGraph:
    """A mixed graph with tagged error and selection nodes, the
    determination map induced by the error structure, and the mapping from
    each error node back to its source node (when the source survives)."""

    graph: MixedGraph
    det: DeterminationMap
    origin: tuple = ()
    provenance: tuple = ()

    @property
    def origin_map(self):
        return dict(self.origin)

    @property
    def error_nodes(self):
        return self.graph.error_nodes

    @property
    def selection_nodes(self):
        return self.graph.selection_nodes

    @property
    def plain_nodes(self):
        return self.graph.plain_nodes

    def same_structure(self, other):
        """Graph and determination equality, ignoring provenance."""
        return (self.graph == other.graph and self.det == other.det
                and frozenset(self.origin) == frozenset(other.origin))


def error_name(node):
    return f"{ERROR_PREFIX}{node}"


def _require_family(g, family):
    report = validate(g, family)
    if not report.ok:
        raise FamilyError(family, report)


def _expand_with_errors(g, family, lift_kinds, provenance):
    _require_family(g, family)
    eps = {}
    for v in g.node_list:
        name = error_name(v)
        if name in g.nodes:
            raise GraphError(f"node name {name} already taken")
        eps[v] = name
    edges = []
    for e in g.edges():
        if e.kind in lift_kinds:
            edges.append((eps[e.a], e.kind, eps[e.b]))
        else:
            edges.append(e)
    for v in g.node_list:
        edges.append((eps[v], EdgeKind.DIRECTED, v))
    graph = MixedGraph(
        nodes=g.nodes | frozenset(eps.values()),
        edges=edges,
        error_nodes=frozenset(eps.values()) | g.error_nodes,
        selection_nodes=g.selection_nodes,
    )
    det = DeterminationMap.make(
        (eps[v], g.parents((v,)) | {v}) for v in g.node_list)
    origin = tuple((eps[v], v) for v in g.node_list)
    out = ErrorGraph(graph, det, origin, provenance)
    _require_family(out.graph, "mamp")
    return out


def eampify(g):
    """Expand a graph with undirected and directed edges: every node gains
    an error parent and each undirected edge moves to the error layer."""
    return _expand_with_errors(
        g, "amp", (EdgeKind.UNDIRECTED,), ("eampify",))


def emampify(g):
    """Expand a full mixed graph: undirected and bidirected edges both move
    to the error layer, keeping their kind."""
    return _expand_with_errors(
        g, "mamp", (EdgeKind.UNDIRECTED, EdgeKind.BIDIRECTED), ("emampify",))


def selectionize(eg):
    """Replace each undirected error coupling by a fresh selection node that
    is a common child of the two error nodes; the result is a DAG."""
    g = eg.graph
    edges = []
    selection = set(g.selection_nodes)
    nodes = set(g.nodes)
    for e in g.edges():
        if e.kind is EdgeKind.UNDIRECTED:
            if e.a not in g.error_nodes or e.b not in g.error_nodes:
                raise GraphError(
                    f"undirected edge {e.a} -- {e.b} touches a non-error node")
            a, b = sorted((e.a, e.b))
            sel = f"{SELECTION_PREFIX}{a}_{b}"
            if sel in nodes:
                raise GraphError(f"node name {sel} already taken")
            nodes.add(sel)
            selection.add(sel)
            edges.append((a, EdgeKind.DIRECTED, sel))
            edges.append((b, EdgeKind.DIRECTED, sel))
        elif e.kind is EdgeKind.BIDIRECTED:
            raise GraphError(
                "selection conversion requires a graph without bidirected edges")
        else:
            edges.append(e)
    graph = MixedGraph(nodes=nodes, edges=edges,
                       error_nodes=g.error_nodes,
                       selection_nodes=frozenset(selection))
    _require_family(graph, "dag")
    return ErrorGraph(graph, eg.det, eg.origin,
                      eg.provenance + ("selectionize",))


def marginalize(eg, drop):
    """Remove the given original nodes, rerouting every parent of a removed
    node to each of its children.

    The outcome does not depend on the removal order.  Determination entries
    that mention a removed node are dropped: once the source node is gone,
    no surviving conditioning set can determine its error node.
    """
    g = eg.graph
    drop = g.as_node_set(drop)
    tagged = drop & (g.error_nodes | g.selection_nodes)
    if tagged:
        raise QueryError(
            f"only plain nodes can be marginalized, got {sorted(tagged)}")
    edge_map = {e.pair: e for e in g.edges()}
    parents = {v: set(g._pa[v]) for v in g.nodes}
    children = {v: set(g._ch[v]) for v in g.nodes}
    for b in sorted(drop):
        for a in sorted(parents[b]):
            for c in sorted(children[b]):
                if a == c:
                    raise GraphError(
                        f"two-node directed cycle through {b}")
                pair = frozenset((a, c))
                existing = edge_map.get(pair)
                if existing is None:
                    edge_map[pair] = Edge(EdgeKind.DIRECTED, a, c)
                    parents[c].add(a)
                    children[a].add(c)
                elif existing.kind is not EdgeKind.DIRECTED or existing.a != a:
                    raise GraphError(
                        f"marginalizing {b} conflicts with edge {existing}")
        for other in parents[b]:
            children[other].discard(b)
        for other in children[b]:
            parents[other].discard(b)
        for pair in [p for p in edge_map if b in p]:
            del edge_map[pair]
        del parents[b]
        del children[b]
    kept_nodes = g.nodes - drop
    graph = MixedGraph(nodes=kept_nodes, edges=edge_map.values(),
                       error_nodes=g.error_nodes,
                       selection_nodes=g.selection_nodes)
    det = DeterminationMap.make(
        (target, determiners) for target, determiners in eg.det
        if target not in drop and not (determiners & drop))
    origin = tuple((e, src) for e, src in eg.origin if src not in drop)
    out = ErrorGraph(graph, det, origin,
                     eg.provenance + (f"marginalize({','.join(sorted(drop))})",))
    _require_family(out.graph, "mamp")
    return out


def latent_lift(g):
    """Replace each bidirected edge by a fresh latent common parent.

    Returns the lifted graph together with the latent node set, so callers
    can marginalize the latents out of any model they enumerate.
    """
    _require_family(g, "mamp")
    edges = []
    latents = set()
    nodes = set(g.nodes)
    for e in g.edges():
        if e.kind is EdgeKind.BIDIRECTED:
            a, b = sorted((e.a, e.b))
            lat = f"{LATENT_PREFIX}{a}_{b}"
            if lat in nodes:
                raise GraphError(f"node name {lat} already taken")
            nodes.add(lat)
            latents.add(lat)
            edges.append((lat, EdgeKind.DIRECTED, a))
            edges.append((lat, EdgeKind.DIRECTED, b))
        else:
            edges.append(e)
    lifted = MixedGraph(nodes=nodes, edges=edges,
                        error_nodes=g.error_nodes,
                        selection_nodes=g.selection_nodes)
    _require_family(lifted, "amp")
    return lifted, frozenset(latents)
