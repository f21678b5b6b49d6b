import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mampcg import (
    CycleError,
    EdgeConflictError,
    EdgeKind,
    MixedGraph,
    UnknownNodeError,
    components,
    neighborhood,
    reachable,
    validate,
)
from mampcg.randomgraphs import random_mixed_graph

from .conftest import g


class TestNeighborhoods:
    def test_parents_of_d(self, mamp_square):
        assert mamp_square.parents(("D",)) == {"A", "B"}
        assert neighborhood(mamp_square, ("D",), "pa") == {"A", "B"}

    def test_empty_query_set(self, mamp_square):
        assert mamp_square.parents(()) == frozenset()

    def test_spouses_neighbors_adjacents(self, mamp_square):
        assert mamp_square.spouses(("F",)) == {"D", "E"}
        assert mamp_square.neighbors(("C",)) == {"D", "E"}
        assert mamp_square.adjacents(("C",)) == {"A", "D", "E"}

    def test_result_excludes_query_set(self, mamp_square):
        # C and D are neighbors; querying both must not return either
        assert "C" not in mamp_square.neighbors(("C", "D"))
        assert "D" not in mamp_square.neighbors(("C", "D"))

    def test_unknown_node(self, mamp_square):
        with pytest.raises(UnknownNodeError):
            mamp_square.parents(("Q",))


class TestReachability:
    def test_kite_descendants(self, kite):
        assert kite.descendants(("A",)) == {"B", "C", "D", "E"}
        assert reachable(kite, ("A",), "descendants") == {"B", "C", "D", "E"}

    def test_kite_strict_ascendants(self, kite):
        assert kite.strict_ascendants(("B",)) == {"A"}

    def test_no_edges(self):
        bare = MixedGraph(nodes=("A", "B"))
        assert bare.descendants(("A",)) == frozenset()

    def test_non_descendants(self, kite):
        assert kite.non_descendants(("A",)) == frozenset()
        # B is reached through E <-> C -- B, so only A remains
        assert kite.non_descendants(("E",)) == {"A"}

    def test_san_implies_descendant(self):
        rng = random.Random(3)
        for _ in range(25):
            graph = random_mixed_graph(rng, 5, 0.4)
            for v in graph.node_list:
                for a in graph.strict_ascendants((v,)):
                    assert v in graph.descendants((a,))


class TestComponents:
    def test_square_connectivity(self, mamp_square):
        assert [sorted(c) for c in mamp_square.connectivity_components()] == [
            ["A"], ["B"], ["C", "D", "E", "F"]]

    def test_square_undirected(self, mamp_square):
        assert [sorted(c) for c in mamp_square.undirected_components()] == [
            ["A"], ["B"], ["C", "D", "E"], ["F"]]

    def test_empty_graph(self):
        assert MixedGraph().connectivity_components() == ()

    def test_component_order_square(self, mamp_square):
        order = mamp_square.component_order()
        assert [sorted(c) for c in order] == [
            ["A"], ["B"], ["C", "D", "E", "F"]]

    def test_component_order_single(self):
        graph = g("A -- B")
        assert graph.component_order() == (frozenset({"A", "B"}),)

    def test_component_order_wings(self, wings):
        order = [sorted(c) for c in wings.component_order()]
        assert order.index(["F"]) == len(order) - 1
        assert order == [["A"], ["B"], ["C", "D", "E"], ["I", "J", "K"], ["F"]]

    def test_component_order_cycle_error(self):
        graph = g("A -> B", "B -> C", "C -> A")
        with pytest.raises(CycleError) as exc:
            graph.component_order()
        w = exc.value.witness
        assert w[0] == w[-1] and len(w) >= 3

    def test_undirected_refines_connectivity(self):
        rng = random.Random(5)
        for _ in range(25):
            graph = random_mixed_graph(rng, 6, 0.4)
            conn = graph.connectivity_components()
            for u in graph.undirected_components():
                assert any(u <= c for c in conn)

    def test_components_wrapper(self, mamp_square):
        assert components(mamp_square, "connectivity") == \
            mamp_square.connectivity_components()
        assert components(mamp_square, "undirected") == \
            mamp_square.undirected_components()


class TestInducedSubgraph:
    def test_square_cdf(self, mamp_square):
        sub = mamp_square.induced_subgraph(("C", "D", "F"))
        assert {e.token_str() for e in sub.edges()} == {"C -- D", "D <-> F"}

    def test_empty(self, mamp_square):
        assert mamp_square.induced_subgraph(()) == MixedGraph()

    def test_identity(self, mamp_square):
        assert mamp_square.induced_subgraph(mamp_square.nodes) == mamp_square


class TestConstruction:
    def test_duplicate_edge_rejected(self):
        with pytest.raises(EdgeConflictError):
            MixedGraph(edges=[("A", "->", "B"), ("A", "--", "B")])

    def test_self_loop_rejected(self):
        with pytest.raises(EdgeConflictError):
            MixedGraph(edges=[("A", "->", "A")])

    def test_reversed_token(self):
        graph = MixedGraph(edges=[("B", "<-", "A")])
        assert graph.has_edge("A", "B", "->")

    def test_tag_requires_declared_node(self):
        with pytest.raises(UnknownNodeError):
            MixedGraph(nodes=("A",), error_nodes=("B",))

    def test_equality_and_hash(self):
        a = g("A -> B", "C -- D")
        b = MixedGraph(edges=[("C", "--", "D"), ("A", "->", "B")])
        assert a == b and hash(a) == hash(b)
        assert a != g("A -> B", "C <-> D")

    def test_skeleton(self, kite):
        assert kite.skeleton() == frozenset(
            frozenset(p) for p in (("A", "B"), ("B", "C"), ("B", "D"),
                                   ("C", "E"), ("D", "E")))


def replay_violation(graph, violation):
    """Check a reported witness actually exhibits its violation."""
    w = violation.witness
    if violation.constraint == "C1":
        assert w[0] == w[-1]
        assert graph.has_edge(w[0], w[1], "->")
        for u, v in zip(w[1:], w[2:]):
            e = graph.edge_between(u, v)
            assert e is not None
            assert e.kind is not EdgeKind.DIRECTED or e.a == u
    elif violation.constraint == "C2":
        assert w[0] == w[-1]
        assert graph.has_edge(w[0], w[1], "<->")
        for u, v in zip(w[1:], w[2:]):
            assert graph.has_edge(u, v, "--")
    elif violation.constraint == "C3":
        u, b, v = w
        assert graph.has_edge(u, b, "--") and graph.has_edge(b, v, "--")
        assert graph.spouses((b,))
        assert not graph.has_edge(u, v, "--")
    else:
        assert violation.constraint == "edge-kind"


class TestValidate:
    def test_square_is_valid(self, mamp_square):
        assert validate(mamp_square, "mamp").ok

    def test_invalid_fixture_reports_c2_and_c3(self, invalid_graph):
        report = validate(invalid_graph, "mamp")
        assert {"C2", "C3"} <= report.constraints()
        for violation in report.violations:
            replay_violation(invalid_graph, violation)

    def test_directed_cycle_dag(self):
        # a two-edge cycle cannot exist: the container is simple, so the
        # smallest constructible directed cycle has three nodes
        report = validate(g("A -> B", "B -> C", "C -> A"), "dag")
        assert report.constraints() == {"C1"}

    def test_parallel_opposite_edges_rejected(self):
        with pytest.raises(EdgeConflictError):
            g("A -> B", "B -> A")

    def test_family_kind_violations(self, mamp_square):
        assert "edge-kind" in validate(mamp_square, "amp").constraints()
        assert "edge-kind" in validate(mamp_square, "mvr").constraints()
        assert "edge-kind" in validate(mamp_square, "dag").constraints()

    def test_amp_fixture_families(self, amp_square):
        assert validate(amp_square, "amp").ok
        assert validate(amp_square, "lwf").ok
        assert validate(amp_square, "mamp").ok

    def test_mag_fails_mvr_c1(self, mag):
        # a directed edge followed by bidirected edges closes a cycle
        report = validate(mag, "mvr")
        assert "C1" in report.constraints()

    def test_semidirected_cycle_with_undirected_step(self):
        report = validate(g("A -> B", "B -- C", "C -- A"), "mamp")
        assert "C1" in report.constraints()
        for violation in report.violations:
            replay_violation(g("A -> B", "B -- C", "C -- A"), violation)

    def test_unknown_family(self, kite):
        with pytest.raises(UnknownNodeError):
            validate(kite, "mag")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_symmetry_of_ne_and_sp(seed):
    graph = random_mixed_graph(random.Random(seed), 6, 0.4)
    for a in graph.node_list:
        for b in graph.neighbors((a,)):
            assert a in graph.neighbors((b,))
        for b in graph.spouses((a,)):
            assert a in graph.spouses((b,))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_removing_bidirected_edge_never_adds_c2_c3(seed):
    rng = random.Random(seed)
    graph = random_mixed_graph(rng, 6, 0.5)
    bidirected = [e for e in graph.edges() if e.kind is EdgeKind.BIDIRECTED]
    if not bidirected:
        return
    before = validate(graph, "mamp")
    victim = rng.choice(bidirected)
    smaller = MixedGraph(
        nodes=graph.nodes,
        edges=[e for e in graph.edges() if e != victim])
    after = validate(smaller, "mamp")

    def keyed(report, constraint):
        return {v.witness for v in report.violations
                if v.constraint == constraint}

    # every surviving C3 violation was already present
    assert keyed(after, "C3") <= keyed(before, "C3")
    # C2 violations are per bidirected edge; removal cannot add one
    assert len(keyed(after, "C2")) <= len(keyed(before, "C2"))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_witnesses_replay(seed):
    graph = random_mixed_graph(random.Random(seed), 5, 0.5)
    for violation in validate(graph, "mamp").violations:
        replay_violation(graph, violation)
