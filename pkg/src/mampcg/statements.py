"""Independence statements, independence models and determination maps."""
from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import QueryError


@dataclass(frozen=True)
class IndependenceStatement:
    """A canonical triple: the two flanks are nonempty, all three sets are
    pairwise disjoint, and the flank with the smaller minimum name comes
    first so that symmetric duplicates collapse."""

    x: frozenset
    y: frozenset
    z: frozenset

    @classmethod
    def make(cls, x, y, z=()):
        x = frozenset(map(str, (x,) if isinstance(x, str) else x))
        y = frozenset(map(str, (y,) if isinstance(y, str) else y))
        z = frozenset(map(str, (z,) if isinstance(z, str) else z))
        if not x or not y:
            raise QueryError("statement flanks must be nonempty")
        if x & y or x & z or y & z:
            raise QueryError("statement sets must be pairwise disjoint")
        if min(y) < min(x):
            x, y = y, x
        return cls(x, y, z)

    @property
    def sort_key(self):
        return (tuple(sorted(self.x)), tuple(sorted(self.y)),
                tuple(sorted(self.z)))

    def mentions(self, nodes):
        nodes = frozenset(nodes)
        return bool((self.x | self.y | self.z) & nodes)

    def __str__(self):
        z = ",".join(sorted(self.z)) if self.z else "{}"
        return (f"{','.join(sorted(self.x))} _||_ "
                f"{','.join(sorted(self.y))} | {z}")


@dataclass(frozen=True)
class IndependenceModel:
    """A finite set of canonical statements over a node universe."""

    universe: frozenset
    statements: frozenset

    def __post_init__(self):
        for s in self.statements:
            if not (s.x | s.y | s.z) <= self.universe:
                raise QueryError(
                    f"statement {s} mentions nodes outside the universe")

    def __contains__(self, statement):
        return statement in self.statements

    def __len__(self):
        return len(self.statements)

    def sorted_statements(self):
        return tuple(sorted(self.statements, key=lambda s: s.sort_key))

    def to_json(self):
        payload = {
            "universe": sorted(self.universe),
            "statements": [
                {"x": sorted(s.x), "y": sorted(s.y), "z": sorted(s.z)}
                for s in self.sorted_statements()
            ],
        }
        return json.dumps(payload, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text):
        payload = json.loads(text)
        stmts = frozenset(
            IndependenceStatement.make(d["x"], d["y"], d["z"])
            for d in payload["statements"]
        )
        return cls(frozenset(payload["universe"]), stmts)


@dataclass(frozen=True)
class DeterminationMap:
    """Registered functional dependencies: each entry says the target node
    is a function of its determiner set."""

    entries: tuple = ()

    @classmethod
    def make(cls, entries):
        normalized = []
        for target, determiners in entries:
            target = str(target)
            determiners = frozenset(map(str, determiners))
            if not determiners:
                raise QueryError(f"empty determiner set for {target}")
            if target in determiners:
                raise QueryError(f"{target} cannot determine itself")
            normalized.append((target, determiners))
        normalized.sort(key=lambda e: (e[0], tuple(sorted(e[1]))))
        return cls(tuple(normalized))

    def __bool__(self):
        return bool(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def targets(self):
        return frozenset(t for t, _ in self.entries)


EMPTY_DETERMINATION = DeterminationMap()


def determined_set(z, det=None):
    """Least fixpoint of ``z`` under the determination entries.

    Always a superset of ``z`` and monotone in it: a target joins as soon
    as its whole determiner set is in.
    """
    out = set((z,) if isinstance(z, str) else z)
    if det is None or not det.entries:
        return frozenset(out)
    pending = list(det.entries)
    changed = True
    while changed:
        changed = False
        rest = []
        for target, determiners in pending:
            if target in out:
                continue
            if determiners <= out:
                out.add(target)
                changed = True
            else:
                rest.append((target, determiners))
        pending = rest
    return frozenset(out)
