"""Triplex machinery and Markov-equivalence tooling.

Two valid mixed chain graphs represent the same separations exactly when
they share adjacencies and triplexes, so equivalence testing reduces to a
local fingerprint.  Classes are materialized by enumerating every
orientation of a skeleton and filtering for validity; the guards keep that
at desk scale.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .errors import FamilyError, GuardError, MaximalityError, QueryError
from .graphs import ARROW, TAIL, EdgeKind, MixedGraph, is_valid, mark_at, validate
from .graphoid import models_equal
from .separation import enumerate_model


@dataclass(frozen=True)
class Triplex:
    """Unordered endpoint pair meeting at a center with no tail leaving it
    and at least one arrowhead, the endpoints themselves non-adjacent."""

    endpoints: frozenset
    center: str

    def __str__(self):
        a, b = sorted(self.endpoints)
        return f"({{{a},{b}}},{self.center})"

    @property
    def sort_key(self):
        return (self.center, tuple(sorted(self.endpoints)))


def triplexes(g):
    """All triplexes of a valid mixed chain graph."""
    if not is_valid(g, "mamp"):
        raise FamilyError("mamp", validate(g, "mamp"))
    found = set()
    for center in g.node_list:
        incident = g.incident(center)
        for (u, eu), (w, ew) in combinations(incident, 2):
            if g.is_adjacent(u, w):
                continue
            mu = mark_at(eu, center)
            mw = mark_at(ew, center)
            if mu is not TAIL and mw is not TAIL and (
                    mu is ARROW or mw is ARROW):
                found.add(Triplex(frozenset((u, w)), center))
    return frozenset(found)


def triplex_equivalent(g, h):
    """Same node set, same adjacencies, same triplexes."""
    if g.nodes != h.nodes:
        raise QueryError("graphs are defined over different node sets")
    return g.skeleton() == h.skeleton() and triplexes(g) == triplexes(h)


def markov_equivalent(g, h, mode="triplex", max_oracle_nodes=7):
    """Markov equivalence of two valid mixed chain graphs.

    Triplex mode applies the fingerprint characterization; oracle mode
    compares the enumerated separation models and exists to test that
    characterization, not for production use.
    """
    if mode == "triplex":
        return triplex_equivalent(g, h)
    if mode != "oracle":
        raise QueryError(f"unknown equivalence mode {mode!r}")
    if g.nodes != h.nodes:
        raise QueryError("graphs are defined over different node sets")
    if len(g.nodes) > max_oracle_nodes:
        raise GuardError(
            f"oracle mode guarded at {max_oracle_nodes} nodes")
    mg = enumerate_model(g, "mamp")
    mh = enumerate_model(h, "mamp")
    return models_equal(mg, mh).equal


_FAMILY_OPTIONS = {
    "mamp": ("--", "->", "<-", "<->"),
    "amp": ("--", "->", "<-"),
    "mvr": ("<->", "->", "<-"),
}


def enumerate_same_skeleton(nodes, pairs, family="mamp",
                            max_nodes=7, max_edges=8):
    """Every valid family member with exactly the given adjacencies.

    ``pairs`` lists unordered endpoint pairs.  Each pair ranges over the
    family's edge kinds; candidates failing validation are discarded.  The
    output order is the deterministic product order of the sorted edges.
    """
    if family not in _FAMILY_OPTIONS:
        raise QueryError(f"unknown enumeration family {family!r}")
    nodes = frozenset(map(str, nodes))
    edge_list = sorted(tuple(sorted(map(str, p))) for p in pairs)
    for a, b in edge_list:
        if a == b:
            raise QueryError(f"skeleton self loop at {a}")
        if a not in nodes or b not in nodes:
            raise QueryError(f"skeleton pair {a},{b} leaves the node set")
    if len(set(edge_list)) != len(edge_list):
        raise QueryError("skeleton repeats a pair")
    if len(nodes) > max_nodes or len(edge_list) > max_edges:
        raise GuardError(
            f"skeleton guard exceeded ({len(nodes)} nodes, "
            f"{len(edge_list)} edges)")
    options = _FAMILY_OPTIONS[family]
    members = []
    for assignment in product(options, repeat=len(edge_list)):
        edges = [(a, kind, b)
                 for (a, b), kind in zip(edge_list, assignment)]
        candidate = MixedGraph(nodes=nodes, edges=edges)
        if validate(candidate, family).ok:
            members.append(candidate)
    return tuple(members)


def representability_search(target, nodes, pairs, family="mamp",
                            criterion=None, max_nodes=7, max_edges=8):
    """First enumerated family member whose model equals the target, if any.

    The criterion defaults to the family's own; the target model's universe
    must equal the node set.
    """
    if criterion is None:
        criterion = family
    nodes = frozenset(map(str, nodes))
    if target.universe != nodes:
        raise QueryError("target universe must equal the skeleton node set")
    for candidate in enumerate_same_skeleton(
            nodes, pairs, family, max_nodes, max_edges):
        model = enumerate_model(candidate, criterion)
        if models_equal(model, target).equal:
            return candidate
    return None


@dataclass(frozen=True)
class ClassEnumeration:
    """A triplex equivalence class: members share adjacencies and triplexes."""

    members: tuple
    skeleton: frozenset

    def __len__(self):
        return len(self.members)


def triplex_class(g, family="mamp", max_nodes=7, max_edges=8):
    """The triplex equivalence class of ``g`` within the family."""
    reference = triplexes(g)
    members = tuple(
        h for h in enumerate_same_skeleton(
            g.nodes, g.skeleton(), family, max_nodes, max_edges)
        if triplexes(h) == reference)
    return ClassEnumeration(members, g.skeleton())


def directed_pairs(g):
    return frozenset(e.pair for e in g.edges()
                     if e.kind is EdgeKind.DIRECTED)


def bidirected_edges(g):
    return frozenset(e.pair for e in g.edges()
                     if e.kind is EdgeKind.BIDIRECTED)


def triplex_edges(g):
    """The edges participating in some triplex, with their kinds."""
    out = set()
    for t in triplexes(g):
        for endpoint in t.endpoints:
            out.add(g.edge_between(endpoint, t.center))
    return frozenset(out)


@dataclass(frozen=True)
class MaximalSets:
    directed_pairs: frozenset
    mdcgs: tuple
    bidirected_edges: frozenset
    mbmdcgs: tuple


def _unique_maximum(realized, what):
    distinct = set(realized)
    maximal = [s for s in distinct
               if not any(s < t for t in distinct)]
    if len(maximal) != 1:
        raise MaximalityError(
            f"no unique maximal {what}: {sorted(sorted(m) for m in maximal)}")
    return maximal[0]


def maximal_sets(class_members):
    """Unique maximal directed pair set with its attaining members, then the
    unique maximal bidirected edge set among those.

    Raises ``MaximalityError`` when either maximum is not unique; on valid
    triplex classes that never happens, so a raise marks a bug.
    """
    members = tuple(class_members)
    if not members:
        raise QueryError("empty equivalence class")
    dsets = [directed_pairs(m) for m in members]
    dmax = _unique_maximum(dsets, "directed pair set")
    mdcgs = tuple(m for m, s in zip(members, dsets) if s == dmax)
    bsets = [bidirected_edges(m) for m in mdcgs]
    bmax = _unique_maximum(bsets, "bidirected edge set")
    mbmdcgs = tuple(m for m, s in zip(mdcgs, bsets) if s == bmax)
    return MaximalSets(dmax, mdcgs, bmax, mbmdcgs)
