"""Seeded random graph generation for tests and audits.

Rejection sampling against the family validator: draw a skeleton, orient
every edge with a family-appropriate kind, keep the first valid draw.  All
draws flow from one ``random.Random`` so corpora are reproducible.
"""
from __future__ import annotations

import random
from string import ascii_uppercase

from .errors import GuardError
from .graphs import MixedGraph, validate

_FAMILY_KIND_TOKENS = {
    "mamp": ("--", "->", "<-", "<->"),
    "amp": ("--", "->", "<-"),
    "lwf": ("--", "->", "<-"),
    "mvr": ("<->", "->", "<-"),
    "dag": ("->", "<-"),
}


def node_names(n):
    if n <= len(ascii_uppercase):
        return tuple(ascii_uppercase[:n])
    return tuple(f"V{i:02d}" for i in range(n))


def random_mixed_graph(rng, n=5, edge_prob=0.35, kinds=("--", "->", "<-", "<->")):
    names = node_names(n)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_prob:
                edges.append((names[i], rng.choice(kinds), names[j]))
    return MixedGraph(nodes=names, edges=edges)


def random_valid_graph(rng, family="mamp", n=5, edge_prob=0.35,
                       max_tries=20000):
    """First valid family member from repeated random draws."""
    kinds = _FAMILY_KIND_TOKENS[family]
    for _ in range(max_tries):
        g = random_mixed_graph(rng, n, edge_prob, kinds)
        if validate(g, family).ok:
            return g
    raise GuardError(
        f"no valid {family} graph with {n} nodes in {max_tries} draws")


def random_corpus(seed, family="mamp", count=20, sizes=(4, 5, 6),
                  edge_prob=0.35):
    """A reproducible list of valid graphs with mixed sizes."""
    rng = random.Random(seed)
    return [
        random_valid_graph(rng, family, rng.choice(sizes), edge_prob)
        for _ in range(count)
    ]


def random_query(rng, g, max_flank=2, allow_empty_z=True):
    """Disjoint (x, y, z) over the graph's nodes."""
    nodes = list(g.node_list)
    rng.shuffle(nodes)
    nx = rng.randint(1, min(max_flank, max(1, len(nodes) - 2)))
    ny = rng.randint(1, min(max_flank, max(1, len(nodes) - nx - 1)))
    xs = frozenset(nodes[:nx])
    ys = frozenset(nodes[nx:nx + ny])
    rest = nodes[nx + ny:]
    zs = frozenset(v for v in rest if rng.random() < 0.5)
    if not allow_empty_z and not zs and rest:
        zs = frozenset(rest[:1])
    return xs, ys, zs
