"""Mixed graphs with undirected, directed and bidirected edges.

The container is immutable: adjacency structure is frozen at construction,
instances hash and compare by content, and every operation returns fresh
values.  All enumerations run in lexicographic node order so results are
reproducible byte for byte.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable, NamedTuple

from .errors import CycleError, EdgeConflictError, UnknownNodeError


class EdgeKind(Enum):
    UNDIRECTED = "--"
    DIRECTED = "->"
    BIDIRECTED = "<->"

    @property
    def token(self):
        return self.value

    @property
    def is_symmetric(self):
        return self is not EdgeKind.DIRECTED


_KIND_BY_TOKEN = {k.value: k for k in EdgeKind}
_KIND_BY_TOKEN["<-"] = EdgeKind.DIRECTED  # reversed form, handled in _as_edge


class Edge(NamedTuple):
    """One edge; ``a -> b`` for directed, endpoints sorted otherwise."""

    kind: EdgeKind
    a: str
    b: str

    @property
    def pair(self):
        return frozenset((self.a, self.b))

    def other(self, node):
        return self.b if node == self.a else self.a

    def token_str(self):
        return f"{self.a} {self.kind.token} {self.b}"


def _as_edge(item):
    if isinstance(item, Edge):
        u, kind, v = item.a, item.kind, item.b
    else:
        u, kind, v = item
    if isinstance(kind, str):
        if kind not in _KIND_BY_TOKEN:
            raise EdgeConflictError(f"unknown edge token {kind!r}")
        if kind == "<-":
            u, v = v, u
        kind = _KIND_BY_TOKEN[kind]
    u, v = str(u), str(v)
    if u == v:
        raise EdgeConflictError(f"self loop at {u}")
    if kind.is_symmetric and v < u:
        u, v = v, u
    return Edge(kind, u, v)


# Marks an edge presents at one of its endpoints.
ARROW = "arrow"
TAIL = "tail"
LINE = "line"


def mark_at(edge, node):
    """End mark of ``edge`` at ``node``: arrowhead, tail or plain line."""
    if edge.kind is EdgeKind.UNDIRECTED:
        return LINE
    if edge.kind is EdgeKind.BIDIRECTED:
        return ARROW
    return ARROW if node == edge.b else TAIL


class MixedGraph:
    """Simple mixed graph over named nodes.

    ``edges`` accepts ``Edge`` values or ``(u, kind, v)`` triples where kind
    is an :class:`EdgeKind` or one of the tokens ``--``, ``->``, ``<-``,
    ``<->``.  Nodes referenced by edges are declared implicitly.  At most one
    edge may connect any pair and self loops are rejected.

    ``error_nodes`` and ``selection_nodes`` tag subsets of the node set; the
    tags travel with the graph through serialization and transforms but do
    not affect any structural query.
    """

    def __init__(self, nodes=(), edges=(), error_nodes=(), selection_nodes=()):
        parsed = [_as_edge(e) for e in edges]
        node_set = {str(n) for n in nodes}
        for e in parsed:
            node_set.add(e.a)
            node_set.add(e.b)
        edge_map = {}
        for e in parsed:
            key = (e.a, e.b) if e.a < e.b else (e.b, e.a)
            if key in edge_map:
                raise EdgeConflictError(
                    f"duplicate edge between {key[0]} and {key[1]}"
                )
            edge_map[key] = e
        self._nodes = frozenset(node_set)
        self._sorted = tuple(sorted(node_set))
        self._edges = edge_map

        for tag_set, label in ((error_nodes, "error"), (selection_nodes, "selection")):
            missing = {str(n) for n in tag_set} - self._nodes
            if missing:
                raise UnknownNodeError(
                    f"{label} tag on undeclared node(s): {sorted(missing)}"
                )
        self._error = frozenset(str(n) for n in error_nodes)
        self._selection = frozenset(str(n) for n in selection_nodes)

        pa = {v: set() for v in self._nodes}
        ch = {v: set() for v in self._nodes}
        ne = {v: set() for v in self._nodes}
        sp = {v: set() for v in self._nodes}
        for e in edge_map.values():
            if e.kind is EdgeKind.DIRECTED:
                pa[e.b].add(e.a)
                ch[e.a].add(e.b)
            elif e.kind is EdgeKind.UNDIRECTED:
                ne[e.a].add(e.b)
                ne[e.b].add(e.a)
            else:
                sp[e.a].add(e.b)
                sp[e.b].add(e.a)
        self._pa = {v: frozenset(s) for v, s in pa.items()}
        self._ch = {v: frozenset(s) for v, s in ch.items()}
        self._ne = {v: frozenset(s) for v, s in ne.items()}
        self._sp = {v: frozenset(s) for v, s in sp.items()}

        incidence = {v: [] for v in self._nodes}
        for e in edge_map.values():
            incidence[e.a].append((e.b, e))
            incidence[e.b].append((e.a, e))
        self._incidence = {
            v: tuple(sorted(pairs)) for v, pairs in incidence.items()
        }

        self._hash = hash(
            (self._nodes, frozenset(edge_map.values()), self._error, self._selection)
        )
        self._family_memo = {}

    # -- basics ----------------------------------------------------------

    @classmethod
    def from_strings(cls, *edge_specs, nodes=(), error_nodes=(), selection_nodes=()):
        """Build from edge strings like ``"A -> B"`` or ``"C -- D"``."""
        edges = []
        for spec in edge_specs:
            parts = spec.split()
            if len(parts) != 3:
                raise EdgeConflictError(f"cannot parse edge spec {spec!r}")
            edges.append((parts[0], parts[1], parts[2]))
        return cls(nodes=nodes, edges=edges, error_nodes=error_nodes,
                   selection_nodes=selection_nodes)

    @property
    def nodes(self):
        return self._nodes

    @property
    def node_list(self):
        return self._sorted

    @property
    def error_nodes(self):
        return self._error

    @property
    def selection_nodes(self):
        return self._selection

    @property
    def plain_nodes(self):
        return self._nodes - self._error - self._selection

    def edges(self):
        return tuple(self._edges[k] for k in sorted(self._edges))

    def edge_between(self, a, b):
        key = (a, b) if a < b else (b, a)
        return self._edges.get(key)

    def is_adjacent(self, a, b):
        return self.edge_between(a, b) is not None

    def has_edge(self, a, b, kind=None):
        e = self.edge_between(a, b)
        if e is None:
            return False
        if kind is not None and e.kind is not _as_kind(kind):
            return False
        if e.kind is EdgeKind.DIRECTED and not (e.a == a and e.b == b):
            return kind is None
        return True

    def skeleton(self):
        return frozenset(e.pair for e in self._edges.values())

    def incident(self, node):
        self._check_nodes((node,))
        return self._incidence[node]

    def _check_nodes(self, xs):
        missing = frozenset(xs) - self._nodes
        if missing:
            raise UnknownNodeError(f"unknown node(s): {sorted(missing)}")

    def as_node_set(self, xs):
        if xs is None:
            return frozenset()
        if isinstance(xs, str):
            xs = (xs,)
        out = frozenset(str(x) for x in xs)
        self._check_nodes(out)
        return out

    # -- neighborhoods (results always exclude the query set) -------------

    def _collect(self, table, xs):
        xs = self.as_node_set(xs)
        out = set()
        for x in xs:
            out |= table[x]
        return frozenset(out - xs)

    def parents(self, xs):
        return self._collect(self._pa, xs)

    def children(self, xs):
        return self._collect(self._ch, xs)

    def neighbors(self, xs):
        return self._collect(self._ne, xs)

    def spouses(self, xs):
        return self._collect(self._sp, xs)

    def adjacents(self, xs):
        xs = self.as_node_set(xs)
        return (self.parents(xs) | self.children(xs)
                | self.neighbors(xs) | self.spouses(xs))

    # -- reachability ------------------------------------------------------

    def _closure(self, step, xs):
        seen = set(xs)
        frontier = deque(xs)
        while frontier:
            v = frontier.popleft()
            for w in step(v):
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        return seen

    def descendants(self, xs):
        """Nodes reachable by routes whose every edge is ->, -- or <->
        traversed forward; the query set itself is excluded."""
        xs = self.as_node_set(xs)
        reached = self._closure(
            lambda v: self._ch[v] | self._ne[v] | self._sp[v], xs)
        return frozenset(reached - xs)

    def strict_ascendants(self, xs):
        """Nodes with a purely directed route into the query set."""
        xs = self.as_node_set(xs)
        reached = self._closure(lambda v: self._pa[v], xs)
        return frozenset(reached - xs)

    def non_descendants(self, xs):
        xs = self.as_node_set(xs)
        return self._nodes - xs - self.descendants(xs)

    # -- components --------------------------------------------------------

    def _partition(self, step):
        parts = []
        seen = set()
        for v in self._sorted:
            if v in seen:
                continue
            comp = self._closure(step, (v,))
            seen |= comp
            parts.append(frozenset(comp))
        return tuple(parts)

    def connectivity_components(self):
        """Maximal sets connected by undirected or bidirected paths."""
        return self._partition(lambda v: self._ne[v] | self._sp[v])

    def undirected_components(self):
        """Maximal sets connected by undirected paths only."""
        return self._partition(lambda v: self._ne[v])

    def undirected_component_of(self, node):
        self._check_nodes((node,))
        return frozenset(self._closure(lambda v: self._ne[v], (node,)))

    def component_order(self):
        """Connectivity components in topological order of directed edges.

        Ties break on the smallest member name.  Raises ``CycleError`` with
        a replayable witness when the graph has a semidirected cycle.
        """
        witness = _semidirected_cycle(self)
        if witness is not None:
            raise CycleError("graph has a semidirected cycle", witness)
        comps = self.connectivity_components()
        comp_of = {}
        for i, comp in enumerate(comps):
            for v in comp:
                comp_of[v] = i
        succ = [set() for _ in comps]
        indeg = [0] * len(comps)
        for e in self._edges.values():
            if e.kind is EdgeKind.DIRECTED:
                i, j = comp_of[e.a], comp_of[e.b]
                if i != j and j not in succ[i]:
                    succ[i].add(j)
                    indeg[j] += 1
        heap = [(min(comps[i]), i) for i in range(len(comps)) if indeg[i] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            _, i = heapq.heappop(heap)
            order.append(comps[i])
            for j in sorted(succ[i]):
                indeg[j] -= 1
                if indeg[j] == 0:
                    heapq.heappush(heap, (min(comps[j]), j))
        return tuple(order)

    # -- derived graphs -----------------------------------------------------

    def induced_subgraph(self, xs):
        xs = self.as_node_set(xs)
        kept = [e for e in self._edges.values() if e.a in xs and e.b in xs]
        return MixedGraph(nodes=xs, edges=kept,
                          error_nodes=self._error & xs,
                          selection_nodes=self._selection & xs)

    # -- dunder -------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return (self._nodes == other._nodes
                and self._edges == other._edges
                and self._error == other._error
                and self._selection == other._selection)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return (f"MixedGraph({len(self._nodes)} nodes, "
                f"{len(self._edges)} edges)")


def _as_kind(kind):
    if isinstance(kind, EdgeKind):
        return kind
    return _KIND_BY_TOKEN[kind]


# -- spec-style functional wrappers ---------------------------------------

_RELATIONS = {
    "pa": MixedGraph.parents,
    "ch": MixedGraph.children,
    "ne": MixedGraph.neighbors,
    "sp": MixedGraph.spouses,
    "ad": MixedGraph.adjacents,
}

_REACH = {
    "descendants": MixedGraph.descendants,
    "non_descendants": MixedGraph.non_descendants,
    "strict_ascendants": MixedGraph.strict_ascendants,
}


def neighborhood(g, xs, relation):
    """Named neighborhood set: relation is pa, ch, ne, sp or ad."""
    try:
        fn = _RELATIONS[relation]
    except KeyError:
        raise UnknownNodeError(f"unknown relation {relation!r}") from None
    return fn(g, xs)


def reachable(g, xs, kind):
    try:
        fn = _REACH[kind]
    except KeyError:
        raise UnknownNodeError(f"unknown reachability kind {kind!r}") from None
    return fn(g, xs)


def components(g, kind="connectivity"):
    if kind == "connectivity":
        return g.connectivity_components()
    if kind == "undirected":
        return g.undirected_components()
    raise UnknownNodeError(f"unknown component kind {kind!r}")


# -- validity ---------------------------------------------------------------

FAMILIES = ("mamp", "amp", "mvr", "lwf", "dag")

_FAMILY_KINDS = {
    "mamp": frozenset(EdgeKind),
    "amp": frozenset((EdgeKind.UNDIRECTED, EdgeKind.DIRECTED)),
    "lwf": frozenset((EdgeKind.UNDIRECTED, EdgeKind.DIRECTED)),
    "mvr": frozenset((EdgeKind.BIDIRECTED, EdgeKind.DIRECTED)),
    "dag": frozenset((EdgeKind.DIRECTED,)),
}


@dataclass(frozen=True)
class Violation:
    constraint: str
    witness: tuple

    def __str__(self):
        return f"{self.constraint}: {' '.join(map(str, self.witness))}"


@dataclass(frozen=True)
class ValidityReport:
    family: str
    violations: tuple

    @property
    def ok(self):
        return not self.violations

    def constraints(self):
        return frozenset(v.constraint for v in self.violations)

    def __str__(self):
        if self.ok:
            return f"valid {self.family}"
        lines = [f"invalid {self.family}:"]
        lines += [f"  {v}" for v in self.violations]
        return "\n".join(lines)


def _reconstruct(prev, end):
    path = [end]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return tuple(reversed(path))


def _bfs_path(g, src, dst, step):
    """Shortest src..dst node path over ``step`` neighborhoods, or None."""
    if src == dst:
        return (src,)
    prev = {src: None}
    frontier = deque((src,))
    while frontier:
        v = frontier.popleft()
        for w in sorted(step(v)):
            if w in prev:
                continue
            prev[w] = v
            if w == dst:
                return _reconstruct(prev, dst)
            frontier.append(w)
    return None


def _descending_path(g, src, dst):
    return _bfs_path(g, src, dst, lambda v: g._ch[v] | g._ne[v] | g._sp[v])


def _undirected_path(g, src, dst):
    return _bfs_path(g, src, dst, lambda v: g._ne[v])


def _semidirected_cycle(g):
    """Witness cycle (A, B, ..., A) whose first edge A -> B is directed and
    whose remaining edges descend forward, or None."""
    for e in g.edges():
        if e.kind is not EdgeKind.DIRECTED:
            continue
        back = _descending_path(g, e.b, e.a)
        if back is not None:
            return (e.a,) + back
    return None


def _c1_violations(g):
    out = []
    for e in g.edges():
        if e.kind is not EdgeKind.DIRECTED:
            continue
        back = _descending_path(g, e.b, e.a)
        if back is not None:
            out.append(Violation("C1", (e.a,) + back))
    return out


def _c2_violations(g):
    out = []
    for e in g.edges():
        if e.kind is not EdgeKind.BIDIRECTED:
            continue
        if e.b in g.undirected_component_of(e.a):
            path = _undirected_path(g, e.b, e.a)
            out.append(Violation("C2", (e.a,) + path))
    return out


def _c3_violations(g):
    out = []
    for b in g.node_list:
        if not g._sp[b]:
            continue
        for u, w in combinations(sorted(g._ne[b]), 2):
            edge = g.edge_between(u, w)
            if edge is None or edge.kind is not EdgeKind.UNDIRECTED:
                out.append(Violation("C3", (u, b, w)))
    return out


def validate(g, family="mamp"):
    """Check ``g`` against one of the graph families.

    mamp requires C1 (no semidirected cycle), C2 (no bidirected edge inside
    an undirected component) and C3 (neighbors of a spoused node form a
    clique of undirected edges).  amp and lwf restrict edges to -- and ->
    plus C1, mvr to <-> and -> plus C1, dag to -> plus acyclicity.  Edge
    kinds outside the family are reported as ``edge-kind`` violations.
    """
    if family not in _FAMILY_KINDS:
        raise UnknownNodeError(f"unknown family {family!r}")
    violations = []
    allowed = _FAMILY_KINDS[family]
    for e in g.edges():
        if e.kind not in allowed:
            violations.append(Violation("edge-kind", (e.a, e.kind.token, e.b)))
    violations.extend(_c1_violations(g))
    if family == "mamp":
        violations.extend(_c2_violations(g))
        violations.extend(_c3_violations(g))
    return ValidityReport(family, tuple(violations))


def is_valid(g, family="mamp"):
    """Memoized validity check used by the query engines."""
    memo = g._family_memo
    if family not in memo:
        memo[family] = validate(g, family).ok
    return memo[family]
