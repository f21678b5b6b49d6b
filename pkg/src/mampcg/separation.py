"""Separation queries over mixed graphs.

Five criteria are supported.  The reference algorithm for the path based
criteria (mamp, mamp-simple, amp, mvr, dag) is exhaustive simple path
enumeration with local pruning: a path transmits dependence only if every
inner node is open, and openness of a node depends only on its two flanking
edges, so closed prefixes are cut immediately.  The lwf criterion is route
based in its definition; it is computed here by the classical construction
(separation in the moral graph of the smallest ancestral set), and a bounded
route oracle is provided as an independent cross check.

A determination map makes extra nodes behave as if conditioned: every
criterion rule is applied with the determined closure of the conditioning
set in place of the set itself.
"""
from __future__ import annotations

from collections import deque
from itertools import combinations

from .errors import FamilyError, GuardError, QueryError
from .graphs import ARROW, LINE, TAIL, EdgeKind, MixedGraph, is_valid, mark_at, validate
from .statements import (
    DeterminationMap,
    IndependenceModel,
    IndependenceStatement,
    determined_set,
)

CRITERIA = ("mamp", "mamp-simple", "amp", "mvr", "lwf", "dag")

# Family each criterion expects its graph to belong to.
_CRITERION_FAMILY = {
    "mamp": "mamp",
    "mamp-simple": "mamp",
    "amp": "amp",
    "mvr": "mvr",
    "lwf": "lwf",
    "dag": "dag",
}

# The mvr criterion doubles as m-separation on ancestral-style graphs,
# which may contain semidirected cycles through bidirected edges; only the
# edge kinds are enforced for it at query time.
_KINDS_ONLY = {"mvr"}

_MVR_KINDS = frozenset((EdgeKind.DIRECTED, EdgeKind.BIDIRECTED))


def _check_criterion_graph(g, criterion):
    if criterion not in _CRITERION_FAMILY:
        raise QueryError(f"unknown criterion {criterion!r}")
    family = _CRITERION_FAMILY[criterion]
    if criterion in _KINDS_ONLY:
        bad = [e for e in g.edges() if e.kind not in _MVR_KINDS]
        if bad:
            raise FamilyError(family, validate(g, family))
        return
    if not is_valid(g, family):
        raise FamilyError(family, validate(g, family))


def _effective_conditioning(g, xs, ys, zs, criterion, det):
    if xs & ys or xs & zs or ys & zs:
        raise QueryError("query sets must be pairwise disjoint")
    if not xs or not ys:
        raise QueryError("query flanks must be nonempty")
    if det and criterion in ("mvr", "dag"):
        raise QueryError(
            f"criterion {criterion!r} does not admit a determination map")
    cond = determined_set(zs, det)
    overlap = (xs | ys) & cond
    if overlap:
        raise QueryError(
            f"flank nodes determined by the conditioning set: {sorted(overlap)}")
    return cond


class _PathRules:
    """Per-query context for the path criteria: the effective conditioning
    set, the triplex anchor set, and the escape-clause lookups."""

    __slots__ = ("g", "criterion", "cond", "anchor")

    def __init__(self, g, criterion, cond):
        self.g = g
        self.criterion = criterion
        self.cond = cond
        self.anchor = cond | g.strict_ascendants(cond)

    def inner_open(self, v, e_in, e_out):
        m_in = mark_at(e_in, v)
        m_out = mark_at(e_out, v)
        if m_in is not TAIL and m_out is not TAIL and (
                m_in is ARROW or m_out is ARROW):
            # triplex node: open only when anchored by the conditioning set
            return v in self.anchor
        if v not in self.cond:
            return True
        if self.criterion == "mvr":
            return False
        if m_in is LINE and m_out is LINE:
            if self.g._pa[v] - self.cond:
                return True
            return self.criterion == "mamp" and bool(self.g._sp[v])
        return False


def _open_path_between(rules, x, y):
    g = rules.g
    on_path = {x}

    def extend(v, e_in):
        for w, e in g.incident(v):
            if w in on_path:
                continue
            if e_in is not None and not rules.inner_open(v, e_in, e):
                continue
            if w == y:
                return True
            on_path.add(w)
            if extend(w, e):
                return True
            on_path.discard(w)
        return False

    return extend(x, None)


def _ancestral_closure(g, seed):
    out = set(seed)
    frontier = deque(seed)
    while frontier:
        v = frontier.popleft()
        for w in g._pa[v] | g._ne[v]:
            if w not in out:
                out.add(w)
                frontier.append(w)
    return frozenset(out)


def _lwf_pair_separated(g, x, y, cond):
    """Classical construction: x and y are separated by the conditioning set
    in the moral graph of the subgraph induced by the smallest set containing
    the query that is closed under parents and neighbors."""
    closed = _ancestral_closure(g, {x, y} | cond)
    sub = g.induced_subgraph(closed)
    adj = {v: set() for v in closed}
    for e in sub.edges():
        adj[e.a].add(e.b)
        adj[e.b].add(e.a)
    for comp in sub.undirected_components():
        for p, q in combinations(sorted(sub.parents(comp)), 2):
            adj[p].add(q)
            adj[q].add(p)
    if x in cond or y in cond:
        return True
    seen = {x}
    frontier = deque((x,))
    while frontier:
        v = frontier.popleft()
        for w in adj[v]:
            if w in cond or w in seen:
                continue
            if w == y:
                return False
            seen.add(w)
            frontier.append(w)
    return True


def separated(g, x, y, z=(), criterion="mamp", det=None):
    """True when no open path (route for lwf) connects the two flanks.

    ``det`` lists functional dependencies; nodes determined by the
    conditioning set behave as if conditioned.  Queries whose flanks contain
    determined nodes are rejected, as are criterion/family mismatches.
    """
    xs = g.as_node_set(x)
    ys = g.as_node_set(y)
    zs = g.as_node_set(z)
    _check_criterion_graph(g, criterion)
    cond = _effective_conditioning(g, xs, ys, zs, criterion, det)
    if criterion == "lwf":
        return all(_lwf_pair_separated(g, a, b, cond)
                   for a in sorted(xs) for b in sorted(ys))
    rules = _PathRules(g, "amp" if criterion == "dag" else criterion, cond)
    return not any(_open_path_between(rules, a, b)
                   for a in sorted(xs) for b in sorted(ys))


# -- bounded route oracle ----------------------------------------------------


def default_route_bound(g):
    n = len(g.nodes)
    return 2 * n * n


def _mamp_route_open(g, xs, ys, cond, max_len):
    """Route criterion: triplex occurrences must sit inside the determined
    conditioning set, all other inner occurrences outside it.  Memoized over
    (node, entering edge) states; openness of an occurrence is local."""
    seen = set()
    frontier = deque()
    for x in sorted(xs):
        for w, e in g.incident(x):
            if w in ys:
                return True
            state = (w, e)
            if state not in seen:
                seen.add(state)
                frontier.append((w, e, 1))
    while frontier:
        v, e_in, depth = frontier.popleft()
        if depth >= max_len:
            continue
        for w, e_out in g.incident(v):
            m_in = mark_at(e_in, v)
            m_out = mark_at(e_out, v)
            triplex = (m_in is not TAIL and m_out is not TAIL
                       and (m_in is ARROW or m_out is ARROW))
            if triplex:
                if v not in cond:
                    continue
            elif v in cond:
                continue
            if w in ys:
                return True
            state = (w, e_out)
            if state not in seen:
                seen.add(state)
                frontier.append((w, e_out, depth + 1))
    return False


def _lwf_route_open(g, xs, ys, cond, max_len):
    """Route criterion over sections: a maximal undirected stretch is open
    when it meets the conditioning set iff the route enters and leaves it
    through arrowheads.  States carry the current section summary."""
    seen = set()
    frontier = deque()
    for x in sorted(xs):
        state = (x, False, x in cond)
        seen.add(state)
        frontier.append((state, 0))
    while frontier:
        (v, boundary_arrow, cond_seen), depth = frontier.popleft()
        if v in ys and not cond_seen:
            return True
        if depth >= max_len:
            continue
        for w, e in g.incident(v):
            if e.kind is EdgeKind.UNDIRECTED:
                state = (w, boundary_arrow, cond_seen or (w in cond))
            else:
                collider = boundary_arrow and mark_at(e, v) is ARROW
                if collider != cond_seen:
                    continue
                state = (w, mark_at(e, w) is ARROW, w in cond)
            if state not in seen:
                seen.add(state)
                frontier.append((state, depth + 1))
    return False


def separated_route_oracle(g, x, y, z=(), det=None, max_len=None,
                           criterion="mamp"):
    """Cross-check oracle: no open route of at most ``max_len`` edges.

    Supports the mamp and lwf route rules.  The default bound is twice the
    squared node count; the oracle is a guard, never the reference.
    """
    if criterion not in ("mamp", "lwf"):
        raise QueryError(
            f"route oracle supports mamp and lwf, not {criterion!r}")
    xs = g.as_node_set(x)
    ys = g.as_node_set(y)
    zs = g.as_node_set(z)
    _check_criterion_graph(g, criterion)
    cond = _effective_conditioning(g, xs, ys, zs, criterion, det)
    if max_len is None:
        max_len = default_route_bound(g)
    if max_len <= 0:
        raise QueryError("max_len must be positive")
    if criterion == "lwf":
        return not _lwf_route_open(g, xs, ys, cond, max_len)
    return not _mamp_route_open(g, xs, ys, cond, max_len)


# -- model enumeration --------------------------------------------------------


def singleton_layer(g, criterion="mamp", det=None, universe=None,
                    condition_on=()):
    """All true singleton statements over ``universe``.

    Each query conditions on ``condition_on`` in addition to its own Z but
    records only Z; statements whose flank is determined by the effective
    conditioning set are skipped as ill posed.  Path criteria are pairwise,
    so this layer determines the whole model.
    """
    _check_criterion_graph(g, criterion)
    if det and criterion in ("mvr", "dag"):
        raise QueryError(
            f"criterion {criterion!r} does not admit a determination map")
    uni = sorted(g.as_node_set(universe if universe is not None else g.nodes))
    extra = g.as_node_set(condition_on)
    if extra & frozenset(uni):
        raise QueryError("condition_on must be disjoint from the universe")
    n = len(uni)
    out = set()
    effective = "amp" if criterion == "dag" else criterion
    for zmask in range(1 << n):
        zset = frozenset(uni[i] for i in range(n) if zmask >> i & 1)
        cond = determined_set(zset | extra, det)
        rules = None
        rest = [v for v in uni if v not in zset]
        for a, b in combinations(rest, 2):
            if a in cond or b in cond:
                continue
            if criterion == "lwf":
                sep = _lwf_pair_separated(g, a, b, cond)
            else:
                if rules is None:
                    rules = _PathRules(g, effective, cond)
                sep = not _open_path_between(rules, a, b)
            if sep:
                out.add(IndependenceStatement.make((a,), (b,), zset))
    return frozenset(out)


def enumerate_model(g, criterion="mamp", det=None, universe=None,
                    condition_on=(), max_universe=8):
    """The full independence model over ``universe``.

    Only singleton pairs are queried; a statement with set flanks holds
    exactly when all its singleton refinements do, because an open path
    between sets is an open path between two members.  Guarded because the
    canonical statement space grows as 4^n.
    """
    uni = sorted(g.as_node_set(universe if universe is not None else g.nodes))
    if len(uni) > max_universe:
        raise GuardError(
            f"universe of {len(uni)} nodes exceeds guard of {max_universe}")
    layer = singleton_layer(g, criterion, det, uni, condition_on)
    index = {v: i for i, v in enumerate(uni)}
    ok = {}
    for s in layer:
        (a,) = s.x
        (b,) = s.y
        zmask = 0
        for v in s.z:
            zmask |= 1 << index[v]
        i, j = sorted((index[a], index[b]))
        ok.setdefault((i, j), set()).add(zmask)
    n = len(uni)
    statements = set()
    for code in range(4 ** n):
        xm = ym = zm = 0
        c = code
        for i in range(n):
            role = c & 3
            c >>= 2
            if role == 0:
                xm |= 1 << i
            elif role == 1:
                ym |= 1 << i
            elif role == 2:
                zm |= 1 << i
        if not xm or not ym:
            continue
        if (xm & -xm) > (ym & -ym):
            continue
        xs = [i for i in range(n) if xm >> i & 1]
        ys = [i for i in range(n) if ym >> i & 1]
        holds = True
        for i in xs:
            for j in ys:
                key = (i, j) if i < j else (j, i)
                if zm not in ok.get(key, ()):
                    holds = False
                    break
            if not holds:
                break
        if holds:
            statements.add(IndependenceStatement.make(
                frozenset(uni[i] for i in xs),
                frozenset(uni[j] for j in ys),
                frozenset(uni[k] for k in range(n) if zm >> k & 1)))
    return IndependenceModel(frozenset(uni), frozenset(statements))


def restrict_model(m, drop=(), given=()):
    """Marginalize ``drop`` out of the model and condition on ``given``.

    A statement survives when its conditional version (Z extended by the
    given set) is in the model and it mentions neither dropped nor given
    nodes.
    """
    drop = frozenset(map(str, (drop,) if isinstance(drop, str) else drop))
    given = frozenset(map(str, (given,) if isinstance(given, str) else given))
    if drop & given:
        raise QueryError("dropped and given sets overlap")
    if not (drop | given) <= m.universe:
        raise QueryError("restriction sets must lie inside the universe")
    universe = m.universe - drop - given
    statements = set()
    for s in m.statements:
        if not given <= s.z:
            continue
        x, y, z = s.x, s.y, s.z - given
        if (x | y | z) <= universe:
            statements.add(IndependenceStatement.make(x, y, z))
    return IndependenceModel(universe, frozenset(statements))
