"""Independence-statement calculus.

The pairwise separation base pairs every non-adjacent couple of nodes with a
small conditioning set read off the graph; closing that base under the six
compositional graphoid rules recovers the full separation model.  The
closure runs on a bitmask encoding of canonical statements with a worklist
keyed by newly derived statements.  A separate auditor instantiates each
rule exhaustively over a model and reports missing conclusions.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import FamilyError, GuardError, QueryError
from .graphs import is_valid, validate
from .statements import IndependenceModel, IndependenceStatement

RULES = (
    "symmetry",
    "decomposition",
    "weak-union",
    "contraction",
    "intersection",
    "composition",
    "weak-transitivity",
)

CLOSURE_RULES = RULES[:6]  # weak transitivity is audit-only


class _Space:
    """Bitmask encoding of statements over a sorted universe."""

    def __init__(self, universe):
        self.names = tuple(sorted(universe))
        self.index = {v: i for i, v in enumerate(self.names)}

    def mask(self, names):
        m = 0
        for v in names:
            m |= 1 << self.index[v]
        return m

    def unmask(self, m):
        return frozenset(v for v, i in self.index.items() if m >> i & 1)

    def encode(self, statement):
        return _canon(self.mask(statement.x), self.mask(statement.y),
                      self.mask(statement.z))

    def decode(self, triple):
        x, y, z = triple
        return IndependenceStatement.make(
            self.unmask(x), self.unmask(y), self.unmask(z))


def _canon(x, y, z):
    # lower lowest-set-bit first; bits follow lexicographic node order
    return (x, y, z) if (x & -x) <= (y & -y) else (y, x, z)


def _proper_submasks(m):
    s = (m - 1) & m
    while s:
        yield s
        s = (s - 1) & m


@dataclass(frozen=True)
class ClosureResult:
    model: IndependenceModel
    iterations: int
    trace: tuple = None

    def __contains__(self, statement):
        return statement in self.model.statements


def closure(base, universe, trace=False, max_universe=7):
    """Least fixpoint of the compositional graphoid rules over the base.

    ``iterations`` counts processed statements.  With ``trace`` on, every
    derived statement records the rule and premises that produced it.
    """
    universe = frozenset(map(str, universe))
    if len(universe) > max_universe:
        raise GuardError(
            f"universe of {len(universe)} nodes exceeds guard of {max_universe}")
    sp = _Space(universe)
    for s in base:
        if not (s.x | s.y | s.z) <= universe:
            raise QueryError(f"base statement {s} leaves the universe")

    stmts = set()
    by_flank = {}
    queue = deque()
    log = {} if trace else None

    def push(x, y, z, rule=None, premises=()):
        t = _canon(x, y, z)
        if t in stmts:
            return
        stmts.add(t)
        queue.append(t)
        by_flank.setdefault(t[0], []).append((t[1], t[2]))
        by_flank.setdefault(t[1], []).append((t[0], t[2]))
        if log is not None and rule is not None:
            log[t] = (rule, premises)

    for s in base:
        push(*sp.encode(s))

    iterations = 0
    while queue:
        t = queue.popleft()
        iterations += 1
        for x, y, z in (t, (t[1], t[0], t[2])):
            # unary rules over splits of the flank
            for ysub in _proper_submasks(y):
                rest = y ^ ysub
                push(x, ysub, z, "decomposition", (t,))
                push(x, ysub, z | rest, "weak-union", (t,))
            # binary rules against statements sharing the x flank
            for py, pz in list(by_flank.get(x, ())):
                if pz == z and not (py & y):
                    push(x, y | py, z, "composition", (t, _canon(x, py, pz)))
                # this statement as X _||_ Y | Z u W, partner as X _||_ W | Z
                if (py & z) == py and pz == z & ~py:
                    push(x, y | py, pz, "contraction",
                         (t, _canon(x, py, pz)))
                # partner as X _||_ Y | Z u W, this statement as X _||_ W | Z
                if (y & pz) == y and z == pz & ~y:
                    push(x, py | y, z, "contraction",
                         (_canon(x, py, pz), t))
                if (py & z) == py and (y & pz) == y and (z & ~py) == (pz & ~y):
                    push(x, y | py, z & ~py, "intersection",
                         (t, _canon(x, py, pz)))

    model = IndependenceModel(universe, frozenset(sp.decode(t) for t in stmts))
    if log is None:
        packed = None
    else:
        packed = tuple(
            (sp.decode(t), rule, tuple(sp.decode(p) for p in premises))
            for t, (rule, premises) in sorted(log.items()))
    return ClosureResult(model, iterations, packed)


def pairwise_base(g):
    """One separation per ordered non-adjacent pair, read off the graph.

    The conditioning set depends on how the pair relates: parents of the
    first node when the second is not among its descendants, and otherwise
    (mutual descendance) either the boundary of the first node's undirected
    neighborhood or again its parents, depending on whether the pair shares
    an undirected component.
    """
    if not is_valid(g, "mamp"):
        raise FamilyError("mamp", validate(g, "mamp"))
    out = set()
    nodes = g.node_list
    de = {v: g.descendants((v,)) for v in nodes}
    uc = {v: g.undirected_component_of(v) for v in nodes}
    for a in nodes:
        ad_a = g.adjacents((a,))
        for b in nodes:
            if b == a or b in ad_a:
                continue
            if b not in de[a]:
                z = g.parents((a,))
            elif a in de[b]:
                if uc[a] == uc[b]:
                    ne_a = g.neighbors((a,))
                    z = ne_a | g.parents(ne_a | {a})
                else:
                    z = g.parents((a,))
            else:
                continue
            out.add(IndependenceStatement.make((a,), (b,), z))
    return frozenset(out)


@dataclass(frozen=True)
class PropertyViolation:
    rule: str
    premises: tuple
    conclusions: tuple  # satisfied when any one of these is present

    def __str__(self):
        prem = " and ".join(str(p) for p in self.premises)
        conc = " or ".join(str(c) for c in self.conclusions)
        return f"{self.rule}: given {prem}, missing {conc}"


def _role_assignments(n, roles):
    total = roles ** n
    for code in range(total):
        masks = [0] * roles
        c = code
        for i in range(n):
            masks[c % roles] |= 1 << i
            c //= roles
        yield masks


def check_properties(m, rules=RULES, max_universe=7):
    """Exhaustively instantiate the selected rules over the model universe.

    A violation records instantiated premises present in the model together
    with the absent conclusion; weak transitivity accepts either disjunct.
    """
    unknown = set(rules) - set(RULES)
    if unknown:
        raise QueryError(f"unknown rules: {sorted(unknown)}")
    sp = _Space(m.universe)
    n = len(sp.names)
    if n > max_universe:
        raise GuardError(
            f"universe of {n} nodes exceeds guard of {max_universe}")
    model = {sp.encode(s) for s in m.statements}
    has = model.__contains__
    violations = []

    def report(rule, premises, conclusions):
        violations.append(PropertyViolation(
            rule,
            tuple(sp.decode(p) for p in premises),
            tuple(sp.decode(c) for c in conclusions)))

    if "symmetry" in rules:
        # canonical storage makes symmetry structural; verify anyway
        for t in model:
            if _canon(t[1], t[0], t[2]) not in model:
                report("symmetry", (t,), (_canon(t[1], t[0], t[2]),))

    split_rules = [r for r in ("decomposition", "weak-union") if r in rules]
    if split_rules:
        # roles: X, Y, W, Z, out
        for xm, ym, wm, zm, _ in _role_assignments(n, 5):
            if not xm or not ym or not wm:
                continue
            whole = _canon(xm, ym | wm, zm)
            if whole not in model:
                continue
            if "decomposition" in split_rules:
                part = _canon(xm, ym, zm)
                if part not in model:
                    report("decomposition", (whole,), (part,))
            if "weak-union" in split_rules:
                part = _canon(xm, ym, zm | wm)
                if part not in model:
                    report("weak-union", (whole,), (part,))

    if "contraction" in rules:
        for xm, ym, wm, zm, _ in _role_assignments(n, 5):
            if not xm or not ym or not wm:
                continue
            p1 = _canon(xm, ym, zm | wm)
            p2 = _canon(xm, wm, zm)
            if has(p1) and has(p2):
                c = _canon(xm, ym | wm, zm)
                if not has(c):
                    report("contraction", (p1, p2), (c,))

    if "intersection" in rules:
        # instances are symmetric in Y and W; keep one orientation
        for xm, ym, wm, zm, _ in _role_assignments(n, 5):
            if not xm or not ym or not wm or (ym & -ym) > (wm & -wm):
                continue
            p1 = _canon(xm, ym, zm | wm)
            p2 = _canon(xm, wm, zm | ym)
            if has(p1) and has(p2):
                c = _canon(xm, ym | wm, zm)
                if not has(c):
                    report("intersection", (p1, p2), (c,))

    if "composition" in rules:
        for xm, ym, wm, zm, _ in _role_assignments(n, 5):
            if not xm or not ym or not wm or (ym & -ym) > (wm & -wm):
                continue
            p1 = _canon(xm, ym, zm)
            p2 = _canon(xm, wm, zm)
            if has(p1) and has(p2):
                c = _canon(xm, ym | wm, zm)
                if not has(c):
                    report("composition", (p1, p2), (c,))

    if "weak-transitivity" in rules:
        # instances are symmetric in X and Y; keep one orientation
        for xm, ym, zm, rest in _role_assignments(n, 4):
            if not xm or not ym or (xm & -xm) > (ym & -ym):
                continue
            for i in range(n):
                km = 1 << i
                if not (rest & km):
                    continue
                p1 = _canon(xm, ym, zm)
                p2 = _canon(xm, ym, zm | km)
                if has(p1) and has(p2):
                    c1 = _canon(xm, km, zm)
                    c2 = _canon(km, ym, zm)
                    if not has(c1) and not has(c2):
                        report("weak-transitivity", (p1, p2), (c1, c2))

    return tuple(violations)


@dataclass(frozen=True)
class ModelDiff:
    equal: bool
    only_in_first: tuple
    only_in_second: tuple
    truncated: bool

    def __str__(self):
        if self.equal:
            return "models equal"
        lines = ["models differ"]
        lines += [f"  only in first: {s}" for s in self.only_in_first]
        lines += [f"  only in second: {s}" for s in self.only_in_second]
        if self.truncated:
            lines.append("  ... (diff truncated)")
        return "\n".join(lines)


def models_equal(a, b, max_report=20):
    """Set equality of two models plus a bounded symmetric difference."""
    if a.universe != b.universe:
        raise QueryError("models compare over different universes")
    equal = a.statements == b.statements
    if equal:
        return ModelDiff(True, (), (), False)
    first = sorted(a.statements - b.statements, key=lambda s: s.sort_key)
    second = sorted(b.statements - a.statements, key=lambda s: s.sort_key)
    truncated = len(first) > max_report or len(second) > max_report
    return ModelDiff(False, tuple(first[:max_report]),
                     tuple(second[:max_report]), truncated)
